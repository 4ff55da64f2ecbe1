#include "steklov/fem.hpp"

#include <cmath>
#include <ostream>

#include "steklov/errors.hpp"
#include "steklov/io.hpp"

namespace steklov {

FemMatrices assemble(const TriangleMesh& mesh) {
  const auto nv = static_cast<Eigen::Index>(mesh.vertices.size());
  const int nt = static_cast<int>(mesh.triangles.size());
  if (nt == 0) fail(ErrorCode::InvalidArgument, "cannot assemble an empty mesh");

  double mean_area = 0.0;
  for (int t = 0; t < nt; ++t) mean_area += std::abs(signed_area(mesh, t));
  mean_area /= nt;

  using Triplet = Eigen::Triplet<double>;
  std::vector<Triplet> k_trip, m_trip, b_trip;
  k_trip.reserve(static_cast<std::size_t>(nt) * 9);
  m_trip.reserve(static_cast<std::size_t>(nt) * 9);

  for (int t = 0; t < nt; ++t) {
    const auto& tri = mesh.triangles[static_cast<std::size_t>(t)];
    const double area = signed_area(mesh, t);
    if (!(area > 1e-14 * mean_area)) {
      fail(ErrorCode::DegenerateTriangle, "triangle " + std::to_string(t) + " has area " + format_number(area));
    }
    // Gradient of the barycentric coordinate of vertex i is (b_i, c_i) / (2A).
    double b[3], c[3];
    for (int i = 0; i < 3; ++i) {
      const Point2& pj = mesh.vertices[tri[(i + 1) % 3]];
      const Point2& pk = mesh.vertices[tri[(i + 2) % 3]];
      b[i] = pj.y() - pk.y();
      c[i] = pk.x() - pj.x();
    }
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        k_trip.emplace_back(tri[i], tri[j], (b[i] * b[j] + c[i] * c[j]) / (4.0 * area));
        m_trip.emplace_back(tri[i], tri[j], area / 12.0 * (i == j ? 2.0 : 1.0));
      }
    }
  }
  for (const auto& e : mesh.boundary_edges) {
    const double len = (mesh.vertices[e.v[1]] - mesh.vertices[e.v[0]]).norm();
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) b_trip.emplace_back(e.v[i], e.v[j], len / 6.0 * (i == j ? 2.0 : 1.0));
    }
  }

  FemMatrices out;
  out.stiffness.resize(nv, nv);
  out.interior_mass.resize(nv, nv);
  out.boundary_mass.resize(nv, nv);
  out.stiffness.setFromTriplets(k_trip.begin(), k_trip.end());
  out.interior_mass.setFromTriplets(m_trip.begin(), m_trip.end());
  out.boundary_mass.setFromTriplets(b_trip.begin(), b_trip.end());
  out.boundary_index = boundary_vertices(mesh);
  return out;
}

double rayleigh_quotient(const FemMatrices& matrices, const Eigen::VectorXd& u) {
  if (u.size() != matrices.stiffness.rows()) fail(ErrorCode::InvalidArgument, "coefficient vector size mismatch");
  const double denom = u.dot(matrices.boundary_mass * u);
  const double scale = u.squaredNorm() * matrices.boundary_mass.coeffs().cwiseAbs().maxCoeff();
  if (!(denom > 1e-14 * scale)) fail(ErrorCode::ZeroBoundaryTrace, "u has no boundary trace");
  return u.dot(matrices.stiffness * u) / denom;
}

void write_matrix_market(std::ostream& os, const SparseMatrix& m) {
  os << "%%MatrixMarket matrix coordinate real general\n";
  os << m.rows() << ' ' << m.cols() << ' ' << m.nonZeros() << '\n';
  for (Eigen::Index col = 0; col < m.outerSize(); ++col) {
    for (SparseMatrix::InnerIterator it(m, col); it; ++it) {
      os << it.row() + 1 << ' ' << it.col() + 1 << ' ' << format_number(it.value()) << '\n';
    }
  }
}

}  // namespace steklov
