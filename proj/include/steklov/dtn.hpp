#pragma once

#include <memory>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCholesky>

#include "steklov/fem.hpp"

namespace steklov {

/// Discrete Dirichlet-to-Neumann map: the Schur complement of the stiffness
/// matrix onto the boundary vertices, S = A_bb − A_bi·A_ii⁻¹·A_ib.
class DtnOperator {
 public:
  explicit DtnOperator(const FemMatrices& matrices);
  ~DtnOperator();
  DtnOperator(DtnOperator&&) noexcept;
  DtnOperator& operator=(DtnOperator&&) noexcept;

  const Eigen::MatrixXd& matrix() const { return schur_; }
  /// Dense boundary block B_bb of the boundary mass matrix.
  const Eigen::MatrixXd& boundary_mass() const { return boundary_mass_; }
  const std::vector<int>& boundary_index() const { return boundary_; }
  const std::vector<int>& interior_index() const { return interior_; }

  /// Harmonic extension of boundary values (ordered as boundary_index) to all vertices.
  Eigen::VectorXd harmonic_extension(const Eigen::VectorXd& trace) const;

 private:
  using Factor = Eigen::SimplicialLLT<SparseMatrix>;

  std::vector<int> boundary_;
  std::vector<int> interior_;
  Eigen::Index num_vertices_ = 0;
  SparseMatrix a_ib_;
  std::unique_ptr<Factor> interior_factor_;
  Eigen::MatrixXd schur_;
  Eigen::MatrixXd boundary_mass_;
};

/// Convenience wrapper returning only S.
Eigen::MatrixXd dtn_matrix(const FemMatrices& matrices);

struct SpectralResult {
  std::vector<double> eigenvalues;  // ascending, σ₀ ≈ 0 first
  Eigen::MatrixXd eigenvectors;     // boundary traces, B_bb-orthonormal columns
  std::vector<int> boundary_index;
  double vol = 0.0;
  double boundary_vol = 0.0;
  double h = 0.0;
  int num_vertices = 0;
  int num_boundary = 0;
  int num_interior = 0;
};

/// Smallest num+1 Steklov eigenpairs of the discrete problem S·φ = σ·B_bb·φ.
SpectralResult steklov_spectrum(const TriangleMesh& mesh, int num);
SpectralResult steklov_spectrum(const TriangleMesh& mesh, const DtnOperator& dtn, int num);

/// JSON record {shape, h, nv, nb, eigenvalues, vol, bvol, trace_sum_m, ratio, deficit}
/// with m = 2 (planar domains).
std::string spectral_result_json(const SpectralResult& result, const std::string& shape);

}  // namespace steklov
