#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/Cholesky>

#include "steklov/dtn.hpp"
#include "steklov/errors.hpp"
#include "steklov/fem.hpp"

using namespace steklov;

namespace {

// Disk oracle: σ_k = ⌈k/2⌉/R.
double disk_sigma(int k, double R) { return std::ceil(k / 2.0) / R; }

}  // namespace

TEST_SUITE("dtn") {
  TEST_CASE("no interior vertices leaves the boundary stiffness") {
    TriangleMesh mesh;
    mesh.vertices = {Point2(0, 0), Point2(1, 0), Point2(0, 1)};
    mesh.triangles = {{0, 1, 2}};
    rebuild_boundary(mesh);
    const FemMatrices m = assemble(mesh);
    const Eigen::MatrixXd s = dtn_matrix(m);
    CHECK((s - Eigen::MatrixXd(m.stiffness)).cwiseAbs().maxCoeff() < 1e-15);
  }

  TEST_CASE("constants are harmonic") {
    for (const DomainShape& shape : {DomainShape{Disk{1}}, DomainShape{Annulus{0.5, 1}}, DomainShape{Ellipse{2, 1}}}) {
      const Eigen::MatrixXd s = dtn_matrix(assemble(build_mesh(shape, 0.1)));
      CHECK((s * Eigen::VectorXd::Ones(s.rows())).norm() <= 1e-8 * s.norm());
      CHECK((s - s.transpose()).cwiseAbs().maxCoeff() == 0.0);
    }
  }

  TEST_CASE("disk spectrum") {
    const SpectralResult r = steklov_spectrum(build_mesh(Disk{1}, 0.05), 4);
    REQUIRE(r.eigenvalues.size() == 5);
    CHECK(std::abs(r.eigenvalues[0]) <= 1e-6);
    for (int k = 1; k <= 4; ++k) CHECK(std::abs(r.eigenvalues[k] - disk_sigma(k, 1)) <= 0.02 * disk_sigma(k, 1));
  }

  TEST_CASE("square has a simple zero mode") {
    const SpectralResult r = steklov_spectrum(build_mesh(Rectangle{2, 2}, 0.1), 2);
    CHECK(std::abs(r.eigenvalues[0]) <= 1e-8);
    CHECK(r.eigenvalues[1] > 0.1);
  }

  TEST_CASE("scaling law on disks") {
    const SpectralResult unit = steklov_spectrum(build_mesh(Disk{1}, 0.05), 4);
    for (double c : {0.5, 2.0}) {
      const SpectralResult scaled = steklov_spectrum(build_mesh(Disk{c}, 0.05 * c), 4);
      for (int k = 1; k <= 4; ++k) CHECK(scaled.eigenvalues[k] == doctest::Approx(unit.eigenvalues[k] / c).epsilon(1e-9));
    }
    const SpectralResult big = steklov_spectrum(build_mesh(Disk{2}, 0.05), 1);
    CHECK(std::abs(big.eigenvalues[1] - 0.5) <= 0.02 * 0.5);
  }

  TEST_CASE("first eigenvalue converges quadratically") {
    double prev = 0.0;
    for (double h : {0.2, 0.1, 0.05}) {
      const double err = std::abs(steklov_spectrum(build_mesh(Disk{1}, h), 1).eigenvalues[1] - 1.0);
      if (prev > 0.0) CHECK(prev / err >= 3.0);
      prev = err;
    }
  }

  TEST_CASE("eigenpairs are consistent with the Rayleigh quotient of their harmonic extensions") {
    const TriangleMesh mesh = build_mesh(Ellipse{2, 1}, 0.1);
    const FemMatrices m = assemble(mesh);
    const DtnOperator dtn(m);
    const SpectralResult r = steklov_spectrum(mesh, dtn, 6);
    for (int k = 1; k <= 6; ++k) {
      const Eigen::VectorXd u = dtn.harmonic_extension(r.eigenvectors.col(k));
      CHECK(rayleigh_quotient(m, u) == doctest::Approx(r.eigenvalues[k]).epsilon(1e-6));
    }
  }

  TEST_CASE("Courant min-max lower bounds") {
    const TriangleMesh mesh = build_mesh(PerturbedDisk{0.05, 3}, 0.1);
    const FemMatrices m = assemble(mesh);
    const DtnOperator dtn(m);
    const SpectralResult r = steklov_spectrum(mesh, dtn, 5);
    const Eigen::MatrixXd& S = dtn.matrix();
    const Eigen::MatrixXd& B = dtn.boundary_mass();
    std::mt19937 rng(11);
    std::normal_distribution<double> n01;
    for (int k = 1; k <= 5; ++k) {
      for (int trial = 0; trial < 10; ++trial) {
        Eigen::VectorXd psi(S.rows());
        for (auto& x : psi) x = n01(rng);
        for (int j = 0; j < k; ++j) {
          const Eigen::VectorXd phi = r.eigenvectors.col(j);
          psi -= phi * (phi.dot(B * psi) / phi.dot(B * phi));
        }
        const double q = psi.dot(S * psi) / psi.dot(B * psi);
        CHECK(q >= r.eigenvalues[k] - 1e-8);
      }
    }
  }

  TEST_CASE("eigenvectors are B-orthonormal") {
    const TriangleMesh mesh = build_mesh(Disk{1}, 0.1);
    const DtnOperator dtn(assemble(mesh));
    const SpectralResult r = steklov_spectrum(mesh, dtn, 4);
    const Eigen::MatrixXd gram = r.eigenvectors.transpose() * dtn.boundary_mass() * r.eigenvectors;
    CHECK((gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff() < 1e-10);
  }

  TEST_CASE("degenerate clusters are compared through projectors") {
    // The disk's σ=1 eigenspace is spanned by the traces of x and y.
    const TriangleMesh mesh = build_mesh(Disk{1}, 0.1);
    const DtnOperator dtn(assemble(mesh));
    const SpectralResult r = steklov_spectrum(mesh, dtn, 2);
    const Eigen::MatrixXd& B = dtn.boundary_mass();
    const Eigen::MatrixXd V = r.eigenvectors.middleCols(1, 2);
    for (int axis = 0; axis < 2; ++axis) {
      Eigen::VectorXd f(V.rows());
      for (Eigen::Index i = 0; i < f.size(); ++i) f[i] = mesh.vertices[r.boundary_index[i]][axis];
      const Eigen::VectorXd projected = V * (V.transpose() * B * f);
      CHECK(std::sqrt((f - projected).dot(B * (f - projected)) / f.dot(B * f)) < 1e-2);
    }
  }

  TEST_CASE("argument checks") {
    const TriangleMesh mesh = build_mesh(Disk{1}, 0.5);
    CHECK_THROWS_AS(steklov_spectrum(mesh, -1), Error);
    const int nb = static_cast<int>(boundary_vertices(mesh).size());
    CHECK_THROWS_AS(steklov_spectrum(mesh, nb), Error);
    CHECK_NOTHROW(steklov_spectrum(mesh, nb - 1));
  }
}
