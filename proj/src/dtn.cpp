#include "steklov/dtn.hpp"

#include <algorithm>
#include <limits>

#include <Eigen/Eigenvalues>

#include "steklov/errors.hpp"
#include "steklov/io.hpp"

namespace steklov {

namespace {

SparseMatrix select(const SparseMatrix& a, const std::vector<int>& rows, const std::vector<int>& cols,
                    const std::vector<int>& row_slot, const std::vector<int>& col_slot) {
  std::vector<Eigen::Triplet<double>> trip;
  for (int c : cols) {
    for (SparseMatrix::InnerIterator it(a, c); it; ++it) {
      const int r = row_slot[static_cast<std::size_t>(it.row())];
      if (r >= 0) trip.emplace_back(r, col_slot[static_cast<std::size_t>(c)], it.value());
    }
  }
  SparseMatrix out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  out.setFromTriplets(trip.begin(), trip.end());
  return out;
}

constexpr Eigen::Index kSchurBlock = 64;

}  // namespace

DtnOperator::DtnOperator(const FemMatrices& matrices) : boundary_(matrices.boundary_index) {
  const SparseMatrix& a = matrices.stiffness;
  num_vertices_ = a.rows();
  if (boundary_.empty()) fail(ErrorCode::InvalidArgument, "mesh has no boundary vertices");

  std::vector<int> slot_b(static_cast<std::size_t>(num_vertices_), -1);
  std::vector<int> slot_i(static_cast<std::size_t>(num_vertices_), -1);
  for (std::size_t k = 0; k < boundary_.size(); ++k) slot_b[static_cast<std::size_t>(boundary_[k])] = static_cast<int>(k);
  for (int v = 0; v < num_vertices_; ++v) {
    if (slot_b[static_cast<std::size_t>(v)] < 0) {
      slot_i[static_cast<std::size_t>(v)] = static_cast<int>(interior_.size());
      interior_.push_back(v);
    }
  }

  schur_ = Eigen::MatrixXd(select(a, boundary_, boundary_, slot_b, slot_b));
  boundary_mass_ = Eigen::MatrixXd(select(matrices.boundary_mass, boundary_, boundary_, slot_b, slot_b));

  if (!interior_.empty()) {
    const SparseMatrix a_ii = select(a, interior_, interior_, slot_i, slot_i);
    a_ib_ = select(a, interior_, boundary_, slot_i, slot_b);
    interior_factor_ = std::make_unique<Factor>(a_ii);
    if (interior_factor_->info() != Eigen::Success) {
      fail(ErrorCode::SingularInteriorBlock, "interior stiffness block is not positive definite");
    }
    // Column blocks of A_ii⁻¹·A_ib keep the dense workspace small.
    const SparseMatrix a_bi = a_ib_.transpose();
    const auto nb = static_cast<Eigen::Index>(boundary_.size());
    for (Eigen::Index c0 = 0; c0 < nb; c0 += kSchurBlock) {
      const Eigen::Index width = std::min(kSchurBlock, nb - c0);
      const Eigen::MatrixXd rhs = Eigen::MatrixXd(a_ib_.middleCols(c0, width));
      const Eigen::MatrixXd x = interior_factor_->solve(rhs);
      if (interior_factor_->info() != Eigen::Success || !x.allFinite()) {
        fail(ErrorCode::SingularInteriorBlock, "interior solve failed");
      }
      schur_.middleCols(c0, width) -= a_bi * x;
    }
  }
  schur_ = 0.5 * (schur_ + schur_.transpose()).eval();
}

DtnOperator::~DtnOperator() = default;
DtnOperator::DtnOperator(DtnOperator&&) noexcept = default;
DtnOperator& DtnOperator::operator=(DtnOperator&&) noexcept = default;

Eigen::VectorXd DtnOperator::harmonic_extension(const Eigen::VectorXd& trace) const {
  if (trace.size() != static_cast<Eigen::Index>(boundary_.size())) {
    fail(ErrorCode::InvalidArgument, "trace size does not match the boundary");
  }
  Eigen::VectorXd u = Eigen::VectorXd::Zero(num_vertices_);
  for (std::size_t k = 0; k < boundary_.size(); ++k) u[boundary_[k]] = trace[static_cast<Eigen::Index>(k)];
  if (!interior_.empty()) {
    const Eigen::VectorXd inner = interior_factor_->solve(-(a_ib_ * trace));
    for (std::size_t k = 0; k < interior_.size(); ++k) u[interior_[k]] = inner[static_cast<Eigen::Index>(k)];
  }
  return u;
}

Eigen::MatrixXd dtn_matrix(const FemMatrices& matrices) { return DtnOperator(matrices).matrix(); }

SpectralResult steklov_spectrum(const TriangleMesh& mesh, const DtnOperator& dtn, int num) {
  const auto nb = static_cast<int>(dtn.boundary_index().size());
  if (num < 0 || num >= nb) {
    fail(ErrorCode::InvalidArgument,
         "num=" + std::to_string(num) + " needs at least num+1 boundary vertices (have " + std::to_string(nb) + ")");
  }
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(dtn.matrix(), dtn.boundary_mass(),
                                                                    Eigen::ComputeEigenvectors | Eigen::Ax_lBx);
  if (solver.info() != Eigen::Success) {
    fail(ErrorCode::EigensolverNoConvergence, "generalized symmetric eigensolver did not converge");
  }
  SpectralResult out;
  const Eigen::VectorXd& values = solver.eigenvalues();
  out.eigenvalues.assign(values.data(), values.data() + num + 1);
  out.eigenvectors = solver.eigenvectors().leftCols(num + 1);
  out.boundary_index = dtn.boundary_index();
  const Volumes v = volumes(mesh);
  out.vol = v.vol;
  out.boundary_vol = v.boundary_vol;
  out.h = mesh.h;
  out.num_vertices = static_cast<int>(mesh.vertices.size());
  out.num_boundary = nb;
  out.num_interior = static_cast<int>(dtn.interior_index().size());
  return out;
}

SpectralResult steklov_spectrum(const TriangleMesh& mesh, int num) {
  const FemMatrices matrices = assemble(mesh);
  const DtnOperator dtn(matrices);
  return steklov_spectrum(mesh, dtn, num);
}

std::string spectral_result_json(const SpectralResult& r, const std::string& shape) {
  constexpr std::size_t m = 2;
  double trace_sum = 0.0;
  for (std::size_t k = 1; k <= m && k < r.eigenvalues.size(); ++k) trace_sum += r.eigenvalues[k];
  const double ratio = r.boundary_vol / r.vol;
  JsonWriter w;
  w.begin_object()
      .field("shape", shape)
      .field("h", r.h)
      .field("nv", r.num_vertices)
      .field("nb", r.num_boundary)
      .key("eigenvalues")
      .array(r.eigenvalues)
      .field("vol", r.vol)
      .field("bvol", r.boundary_vol)
      .field("trace_sum_m", r.eigenvalues.size() > m ? trace_sum : std::numeric_limits<double>::quiet_NaN())
      .field("ratio", ratio)
      .field("deficit", r.eigenvalues.size() > m ? ratio - trace_sum : std::numeric_limits<double>::quiet_NaN())
      .end_object();
  return w.str();
}

}  // namespace steklov
