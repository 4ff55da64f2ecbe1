#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <map>
#include <numbers>

#include "steklov/errors.hpp"
#include "steklov/factor_spectrum.hpp"

using namespace steklov;

TEST_SUITE("factor_spectrum") {
  TEST_CASE("unit circle") {
    const auto groups = laplace_closed_factor_spectrum(CircleFactor{1.0}, 4);
    const std::vector<double> expanded = expand(groups);
    const std::vector<double> expected{0, 1, 1, 4, 4, 9, 9};
    REQUIRE(expanded.size() == expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i) CHECK(expanded[i] == doctest::Approx(expected[i]));
  }

  TEST_CASE("circle spectrum matches periodic finite differences") {
    const double L = 0.7;
    const int n = 400;
    const double dx = 2 * std::numbers::pi * L / n;
    Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
      lap(i, i) = 2 / (dx * dx);
      lap(i, (i + 1) % n) = -1 / (dx * dx);
      lap(i, (i + n - 1) % n) = -1 / (dx * dx);
    }
    const Eigen::VectorXd fd = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(lap, Eigen::EigenvaluesOnly).eigenvalues();
    const std::vector<double> exact = expand(laplace_closed_factor_spectrum(CircleFactor{L}, 4));
    for (std::size_t i = 1; i < exact.size(); ++i) CHECK(std::abs(fd[i] - exact[i]) <= 1e-2 * exact[i]);
    CHECK(laplace_closed_factor_spectrum(CircleFactor{L}, 2)[1].value == doctest::Approx(1 / (L * L)));
  }

  TEST_CASE("flat torus multiplicities match lattice enumeration") {
    const double L1 = 1.0, L2 = 1.5;
    std::map<long long, int> count;  // μ scaled to an integer key
    for (int a = -20; a <= 20; ++a) {
      for (int b = -20; b <= 20; ++b) {
        const double mu = a * a / (L1 * L1) + b * b / (L2 * L2);
        ++count[std::llround(mu * 1e9)];
      }
    }
    const auto groups = laplace_closed_factor_spectrum(TorusFactor{L1, L2}, 12);
    auto it = count.begin();
    for (const auto& g : groups) {
      CHECK(g.value == doctest::Approx(it->first * 1e-9).epsilon(1e-9));
      CHECK(g.multiplicity == it->second);
      ++it;
    }
  }

  TEST_CASE("listed spectra") {
    const auto groups = laplace_closed_factor_spectrum(ListedFactor{{0, 2, 2, 2, 5}}, 10);
    REQUIRE(groups.size() == 3);
    CHECK(groups[1].value == 2);
    CHECK(groups[1].multiplicity == 3);
    CHECK(expand(laplace_closed_factor_spectrum(ListedFactor{{0}}, 5)) == std::vector<double>{0});
    for (const std::vector<double> bad : {std::vector<double>{}, {1, 2}, {0, 3, 2}, {0, -1}, {0, NAN}}) {
      try {
        validate(ClosedFactor{ListedFactor{bad}});
        FAIL("expected InvalidSpectrumList");
      } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InvalidSpectrumList);
      }
    }
  }

  TEST_CASE("grouping merges values within relative tolerance") {
    const auto g = group_values({0.0, 1.0, 1.0 + 1e-14, 2.0});
    REQUIRE(g.size() == 3);
    CHECK(g[1].multiplicity == 2);
    CHECK(describe(CircleFactor{0.5}) == "circle(L=0.5)");
    CHECK_THROWS_AS(validate(ClosedFactor{CircleFactor{0.0}}), Error);
  }
}
