#include "steklov/ball_factor.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "steklov/errors.hpp"
#include "steklov/io.hpp"

namespace steklov {

namespace {

constexpr double kStartFraction = 1e-6;
constexpr int kBaseSteps = 10000;
constexpr double kRichardsonTol = 1e-9;
constexpr double kRiccatiSwitch = 30.0;
constexpr int kMaxLinearIndex = 40;
constexpr double kStepScale = 0.004;

// Logarithmic derivative r·g'/g of the regular series g ≈ r^k(1 + μr²/(4(k+1))).
double series_start(double r0, double mu, int k) {
  const double c = mu / (4.0 * (k + 1));
  return k + 2.0 * c * r0 * r0 / (1.0 + c * r0 * r0);
}

// Nodes in s = ln r from s0 to s1, graded so that ds·(k + 1 + √μ·e^s) ≤ kStepScale;
// halving every interval gives the refined grid.
std::vector<double> shooting_grid(double s0, double s1, double mu, int k, bool refined) {
  const double root = std::sqrt(mu);
  const double ds_max = (s1 - s0) / kBaseSteps;
  std::vector<double> grid{s0};
  for (double s = s0; s < s1;) {
    const double ds = std::min(ds_max, kStepScale / (k + 1.0 + root * std::exp(s)));
    s = std::min(s1, s + ds);
    if (s1 - s < 1e-3 * ds) s = s1;
    if (refined) grid.push_back(0.5 * (grid.back() + s));
    grid.push_back(s);
  }
  return grid;
}

template <class State, class Rhs>
State rk4_grid(const std::vector<double>& grid, State y, const Rhs& rhs) {
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double s = grid[i];
    const double ds = grid[i + 1] - s;
    const State a = rhs(s, y);
    const State b = rhs(s + 0.5 * ds, y + 0.5 * ds * a);
    const State c = rhs(s + 0.5 * ds, y + 0.5 * ds * b);
    const State d = rhs(s + ds, y + ds * c);
    y = y + ds / 6.0 * (a + 2.0 * b + 2.0 * c + d);
  }
  return y;
}

// d/ds (g, g_s) = (g_s, (k² + μe^{2s}) g); returns g_s/g at the last node.
double shoot_linear(const std::vector<double>& grid, double mu, int k, double w0) {
  const double k2 = double(k) * k;
  const Eigen::Vector2d y = rk4_grid(grid, Eigen::Vector2d(1.0, w0), [&](double s, const Eigen::Vector2d& g) {
    return Eigen::Vector2d(g[1], (k2 + mu * std::exp(2.0 * s)) * g[0]);
  });
  return y[1] / y[0];
}

// dw/ds = k² + μe^{2s} − w².
double shoot_riccati(const std::vector<double>& grid, double mu, int k, double w0) {
  const double k2 = double(k) * k;
  return rk4_grid(grid, w0, [&](double s, double w) { return k2 + mu * std::exp(2.0 * s) - w * w; });
}

void check_radius_mu(double R, double mu) {
  if (!(R > 0.0) || !std::isfinite(R)) fail(ErrorCode::InvalidArgument, "ball radius must be positive");
  if (!(mu >= 0.0) || !std::isfinite(mu)) fail(ErrorCode::InvalidArgument, "mu must be nonnegative");
}

}  // namespace

void validate(const BallFactorQuery& q) {
  if (q.m != 1 && q.m != 2) fail(ErrorCode::InvalidArgument, "ball dimension must be 1 or 2");
  check_radius_mu(q.R, q.mu);
  if (q.branch < 0) fail(ErrorCode::InvalidArgument, "branch index must be nonnegative");
  if (q.m == 1 && q.branch > 1) fail(ErrorCode::InvalidArgument, "interval branch must be 0 (even) or 1 (odd)");
}

double sigma_mu_interval(double R, double mu, Parity parity) {
  check_radius_mu(R, mu);
  const double s = std::sqrt(mu);
  const double x = s * R;
  if (parity == Parity::Even) return s * std::tanh(x);
  if (x < 1e-8) return 1.0 / R + mu * R / 3.0;
  return s / std::tanh(x);
}

double sigma_mu_disk(double R, double mu, int k) {
  check_radius_mu(R, mu);
  if (k < 0) fail(ErrorCode::InvalidArgument, "angular index must be nonnegative");
  if (mu == 0.0) return k / R;

  const double r0 = kStartFraction * R;
  const double s0 = std::log(r0);
  const double s1 = std::log(R);
  const double w0 = series_start(r0, mu, k);
  const std::vector<double> coarse_grid = shooting_grid(s0, s1, mu, k, false);
  const std::vector<double> fine_grid = shooting_grid(s0, s1, mu, k, true);

  bool riccati = std::sqrt(mu) * R > kRiccatiSwitch || k > kMaxLinearIndex;
  auto run = [&](const std::vector<double>& grid) {
    return riccati ? shoot_riccati(grid, mu, k, w0) : shoot_linear(grid, mu, k, w0);
  };
  double coarse = run(coarse_grid);
  double fine = run(fine_grid);
  if (!riccati && !(std::isfinite(coarse) && std::isfinite(fine))) {
    // Overflow of g itself: rescale by switching to the logarithmic derivative.
    riccati = true;
    coarse = run(coarse_grid);
    fine = run(fine_grid);
  }
  if (!std::isfinite(fine) || !(std::abs(fine - coarse) <= kRichardsonTol * std::abs(fine))) {
    fail(ErrorCode::ShootingBlowup, "radial shooting unstable for mu=" + format_label(mu) +
                                        ", k=" + std::to_string(k) + "");
  }
  return fine / R;
}

double sigma_mu_disk_series(double R, double mu, int k) {
  check_radius_mu(R, mu);
  if (k < 0) fail(ErrorCode::InvalidArgument, "angular index must be nonnegative");
  if (mu == 0.0) return k / R;
  const double x = std::sqrt(mu) * R;
  if (x > 600.0) fail(ErrorCode::InvalidArgument, "series oracle limited to sqrt(mu)*R <= 600");
  const double q = 0.25 * x * x;
  // k!·Σ q^j/(j!(j+k)!) and k!·Σ q^j/(j!(j+k+1)!), term by term.
  double a_term = 1.0, a_sum = 1.0;
  double b_term = 1.0 / (k + 1), b_sum = b_term;
  for (int j = 1; j < 100000; ++j) {
    a_term *= q / (double(j) * (j + k));
    b_term *= q / (double(j) * (j + k + 1));
    a_sum += a_term;
    b_sum += b_term;
    if (j > x && a_term <= 1e-18 * a_sum && b_term <= 1e-18 * b_sum) break;
  }
  // I_k' = I_{k+1} + (k/x)·I_k.
  return std::sqrt(mu) * (0.5 * x * b_sum / a_sum) + k / R;
}

double ball_branch(const BallFactorQuery& q) {
  validate(q);
  if (q.m == 1) return sigma_mu_interval(q.R, q.mu, q.branch == 0 ? Parity::Even : Parity::Odd);
  return sigma_mu_disk(q.R, q.mu, q.branch);
}

int lowest_branch(const BallFactorQuery& q) {
  BallFactorQuery a = q, b = q;
  a.branch = 0;
  b.branch = 1;
  return ball_branch(b) < ball_branch(a) ? 1 : 0;
}

double sigma_of_mu(const BallFactorQuery& q) {
  BallFactorQuery a = q, b = q;
  a.branch = 0;
  b.branch = 1;
  return std::min(ball_branch(a), ball_branch(b));
}

}  // namespace steklov
