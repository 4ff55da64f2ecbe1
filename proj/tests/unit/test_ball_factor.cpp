#include <doctest.h>

#include <cmath>
#include <functional>
#include <vector>

#include "steklov/ball_factor.hpp"
#include "steklov/errors.hpp"

using namespace steklov;

namespace {

// Schur complement onto the last node of a symmetric tridiagonal system
// (diag d, off-diagonal e), with the first node removed when `pin_first`.
double tridiagonal_schur(std::vector<double> d, std::vector<double> e, bool pin_first) {
  const std::size_t start = pin_first ? 1 : 0;
  const std::size_t last = d.size() - 1;
  // Forward elimination of nodes start..last-1.
  for (std::size_t i = start; i < last; ++i) {
    const double f = e[i] / d[i];
    d[i + 1] -= f * e[i];
  }
  return d[last];
}

// P1 minimum of ∫₀^R (f'² + μf²) w(r) dr + ∫₀^R q(r) f² dr over f(R) = 1, on n elements,
// divided by the boundary weight. Exact element integrals via 5-point Gauss.
double radial_p1(double R, double mu, int n, const std::function<double(double)>& w,
                 const std::function<double(double)>& q, bool pin_origin, double boundary_weight) {
  static const double gx[5] = {-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831, 0.9061798459386640};
  static const double gw[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889, 0.4786286704993665,
                               0.2369268850561891};
  std::vector<double> d(n + 1, 0.0), e(n, 0.0);
  const double dr = R / n;
  for (int k = 0; k < n; ++k) {
    const double a = k * dr;
    double kaa = 0, kab = 0, kbb = 0;
    for (int g = 0; g < 5; ++g) {
      const double r = a + 0.5 * dr * (1 + gx[g]);
      const double wt = 0.5 * dr * gw[g];
      const double pa = 1 - (r - a) / dr, pb = (r - a) / dr;
      const double stiff = w(r) / (dr * dr);
      const double mass = mu * w(r) + q(r);
      kaa += wt * (stiff + mass * pa * pa);
      kbb += wt * (stiff + mass * pb * pb);
      kab += wt * (-stiff + mass * pa * pb);
    }
    d[k] += kaa;
    d[k + 1] += kbb;
    e[k] += kab;
  }
  return tridiagonal_schur(d, e, pin_origin) / boundary_weight;
}

double bessel_oracle(double R, double mu, int k) {
  const double x = std::sqrt(mu) * R;
  const double ik = std::cyl_bessel_i(double(k), x);
  const double ik1 = std::cyl_bessel_i(double(k + 1), x);
  return std::sqrt(mu) * (ik1 + k / x * ik) / ik;
}

}  // namespace

TEST_SUITE("ball_factor") {
  TEST_CASE("interval closed forms") {
    CHECK(sigma_mu_interval(1, 1, Parity::Even) == doctest::Approx(std::tanh(1.0)).epsilon(1e-15));
    CHECK(sigma_mu_interval(1, 0, Parity::Odd) == doctest::Approx(1.0));
    CHECK(sigma_mu_interval(1, 0, Parity::Even) == 0.0);
    CHECK(sigma_mu_interval(2, 1e-20, Parity::Odd) == doctest::Approx(0.5));
    // Small-μ slope R on the even branch.
    for (double R : {0.5, 1.0, 3.0}) CHECK(sigma_mu_interval(R, 1e-8, Parity::Even) / 1e-8 == doctest::Approx(R).epsilon(1e-7));
  }

  TEST_CASE("interval matches a direct Rayleigh discretization") {
    // Half interval [0, R]: even modes are free at 0, odd modes vanish there.
    const auto one = [](double) { return 1.0; };
    const auto zero = [](double) { return 0.0; };
    for (double R : {0.5, 1.0, 2.0}) {
      for (double mu : {0.25, 1.0, 4.0}) {
        // P1 error is O(dr²); Richardson on n and 2n removes it without the
        // round-off a single very fine solve accumulates.
        const auto extrapolate = [&](bool pin) {
          const double a = radial_p1(R, mu, 2000, one, zero, pin, 1.0), b = radial_p1(R, mu, 4000, one, zero, pin, 1.0);
          return (4.0 * b - a) / 3.0;
        };
        const double even = extrapolate(false);
        const double odd = extrapolate(true);
        CHECK(std::abs(even - sigma_mu_interval(R, mu, Parity::Even)) <= 1e-6);
        CHECK(std::abs(odd - sigma_mu_interval(R, mu, Parity::Odd)) <= 1e-6);
      }
    }
  }

  TEST_CASE("disk at mu = 0 gives k/R") {
    for (int k = 0; k < 6; ++k) CHECK(sigma_mu_disk(2.0, 0.0, k) == doctest::Approx(k / 2.0));
    CHECK(sigma_mu_disk(1, 0, 1) == 1.0);
  }

  TEST_CASE("shooting agrees with the Bessel series and the library oracle") {
    for (int k = 0; k <= 3; ++k) {
      for (int i = 0; i <= 16; ++i) {
        const double mu = std::pow(10.0, -2.0 + 4.0 * i / 16);
        const double shoot = sigma_mu_disk(1.0, mu, k);
        const double series = sigma_mu_disk_series(1.0, mu, k);
        CAPTURE(mu);
        CAPTURE(k);
        CHECK(std::abs(shoot - series) <= 1e-8 * std::abs(series));
        CHECK(std::abs(series - bessel_oracle(1.0, mu, k)) <= 1e-10 * std::abs(series));
      }
    }
    CHECK(sigma_mu_disk_series(1, 1, 0) == doctest::Approx(std::cyl_bessel_i(1.0, 1.0) / std::cyl_bessel_i(0.0, 1.0)));
  }

  TEST_CASE("large mu asymptotics and Riccati range") {
    const double mu = 1e4;
    const double s = sigma_of_mu({2, 1.0, mu, 0});
    CHECK(std::abs(s / std::sqrt(mu) - 1.0) <= 0.01);
    CHECK(std::abs(s - bessel_oracle(1.0, mu, 0)) <= 1e-8 * s);
    CHECK(std::abs(sigma_mu_disk(1.0, mu, 60) - bessel_oracle(1.0, mu, 60)) <= 1e-8 * sigma_mu_disk(1.0, mu, 60));
  }

  TEST_CASE("radial FEM gives upper bounds") {
    for (double mu : {0.1, 1.0, 10.0}) {
      // k = 0: weight r, boundary weight R; k = 1 adds ∫ f²/r with f(0) = 0.
      const double R = 1.0;
      const auto r_weight = [](double r) { return r; };
      const double up0 = radial_p1(R, mu, 2000, r_weight, [](double) { return 0.0; }, false, R);
      const double up1 = radial_p1(R, mu, 2000, r_weight, [](double r) { return 1.0 / r; }, true, R);
      CHECK(up0 >= sigma_mu_disk(R, mu, 0) - 1e-6);
      CHECK(up1 >= sigma_mu_disk(R, mu, 1) - 1e-6);
      CHECK(up0 - sigma_mu_disk(R, mu, 0) <= 1e-4);
      CHECK(up1 - sigma_mu_disk(R, mu, 1) <= 1e-4);
    }
  }

  TEST_CASE("sigma(mu) is nondecreasing and branches are ordered") {
    for (int m : {1, 2}) {
      double prev = -1.0;
      for (int i = 0; i < 50; ++i) {
        const double mu = std::pow(10.0, -3.0 + 6.0 * i / 49);
        const double s = sigma_of_mu({m, 1.0, mu, 0});
        CHECK(s >= prev);
        prev = s;
        CHECK(lowest_branch({m, 1.0, mu, 0}) == 0);
      }
    }
    for (double mu : {0.01, 1.0, 100.0}) {
      for (int k = 0; k < 5; ++k) CHECK(sigma_mu_disk(1, mu, k + 1) > sigma_mu_disk(1, mu, k));
    }
  }

  TEST_CASE("sigma_of_mu matches the cylinder formula") {
    for (double L : {0.25, 0.5, 1.0, 2.0, 4.0}) {
      CHECK(sigma_of_mu({1, 1.0, 1 / (L * L), 0}) == doctest::Approx(std::tanh(1 / L) / L).epsilon(1e-14));
    }
    CHECK(sigma_of_mu({2, 1.0, 0.0, 0}) == 0.0);
  }

  TEST_CASE("query validation") {
    CHECK_THROWS_AS(validate(BallFactorQuery{3, 1, 1, 0}), Error);
    CHECK_THROWS_AS(validate(BallFactorQuery{1, -1, 1, 0}), Error);
    CHECK_THROWS_AS(validate(BallFactorQuery{1, 1, -1, 0}), Error);
    CHECK_THROWS_AS(validate(BallFactorQuery{1, 1, 1, 2}), Error);
    CHECK_NOTHROW(validate(BallFactorQuery{2, 1, 1, 7}));
  }
}
