#pragma once

#include <iosfwd>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "steklov/mesh.hpp"

namespace steklov {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// P1 finite-element matrices over all mesh vertices.
struct FemMatrices {
  SparseMatrix stiffness;       // ∫ ∇φi·∇φj
  SparseMatrix interior_mass;   // ∫ φi φj over the domain
  SparseMatrix boundary_mass;   // ∫_∂ φi φj, nonzero only on boundary vertices
  std::vector<int> boundary_index;  // sorted boundary vertex ids
};

/// Exact affine-element assembly. Throws DegenerateTriangle when a triangle
/// area falls below 1e-14 of the mean area.
FemMatrices assemble(const TriangleMesh& mesh);

/// Discrete Steklov quotient (uᵀKu)/(uᵀBu). Throws ZeroBoundaryTrace when u vanishes on the boundary.
double rayleigh_quotient(const FemMatrices& matrices, const Eigen::VectorXd& u);

/// Nodal interpolant of f on the mesh vertices.
template <class F>
Eigen::VectorXd interpolate(const TriangleMesh& mesh, F&& f) {
  Eigen::VectorXd u(static_cast<Eigen::Index>(mesh.vertices.size()));
  for (std::size_t i = 0; i < mesh.vertices.size(); ++i) u[static_cast<Eigen::Index>(i)] = f(mesh.vertices[i]);
  return u;
}

/// Matrix-market style triplet dump (1-based indices) for debugging.
void write_matrix_market(std::ostream& os, const SparseMatrix& m);

}  // namespace steklov
