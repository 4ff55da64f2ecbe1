#include "steklov/product.hpp"

#include <algorithm>
#include <cmath>

#include "steklov/ball_factor.hpp"
#include "steklov/errors.hpp"
#include "steklov/io.hpp"

namespace steklov {

namespace {

constexpr double kMergeTol = 1e-12;

void validate(const ProductSpec& spec) {
  validate(BallFactorQuery{spec.m, spec.R, 0.0, 0});
  validate(spec.fiber);
  if (spec.num < 1) fail(ErrorCode::InvalidArgument, "num must be at least 1");
}

// Largest value among the first `num` entries counted with multiplicity, or +inf.
double cutoff(std::vector<SpectralValue>& candidates, int num) {
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const SpectralValue& a, const SpectralValue& b) { return a.value < b.value; });
  long seen = 0;
  for (const auto& c : candidates) {
    seen += c.multiplicity;
    if (seen >= num) return c.value;
  }
  return std::numeric_limits<double>::infinity();
}

double ball_value(const ProductSpec& spec, double mu, int branch) {
  return ball_branch(BallFactorQuery{spec.m, spec.R, mu, branch});
}

}  // namespace

std::vector<SpectralValue> product_steklov_spectrum(const ProductSpec& spec) {
  validate(spec);
  std::vector<SpectralValue> candidates;
  std::size_t batch = 16;
  auto mu_groups = laplace_closed_factor_spectrum(spec.fiber, batch);

  for (std::size_t i = 0;; ++i) {
    if (i == mu_groups.size()) {
      if (is_finite(spec.fiber)) break;
      batch *= 2;
      mu_groups = laplace_closed_factor_spectrum(spec.fiber, batch);
    }
    const auto [mu, mu_mult] = mu_groups[i];
    // σ(μ) is nondecreasing in μ and bounds every branch from below.
    double limit = cutoff(candidates, spec.num);
    if (ball_value(spec, mu, 0) > limit) break;

    if (spec.m == 1) {
      for (int parity = 0; parity < 2; ++parity) {
        const double s = ball_value(spec, mu, parity);
        if (s <= limit) candidates.push_back({s, mu_mult});
        limit = cutoff(candidates, spec.num);
      }
    } else {
      for (int k = 0;; ++k) {
        const double s = ball_value(spec, mu, k);
        if (s > limit) break;
        candidates.push_back({s, (k == 0 ? 1 : 2) * mu_mult});
        limit = cutoff(candidates, spec.num);
      }
    }
  }

  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const SpectralValue& a, const SpectralValue& b) { return a.value < b.value; });
  std::vector<SpectralValue> merged;
  for (const auto& c : candidates) {
    if (!merged.empty() &&
        std::abs(merged.back().value - c.value) <= kMergeTol * std::max(std::abs(merged.back().value), std::abs(c.value))) {
      merged.back().multiplicity += c.multiplicity;
    } else {
      merged.push_back(c);
    }
  }
  std::vector<SpectralValue> out;
  int remaining = spec.num;
  for (const auto& g : merged) {
    if (remaining <= 0) break;
    out.push_back({g.value, std::min(g.multiplicity, remaining)});
    remaining -= out.back().multiplicity;
  }
  return out;
}

RigidityCheck rigidity_condition(const ProductSpec& spec) {
  validate(spec);
  const auto groups = laplace_closed_factor_spectrum(spec.fiber, 2);
  const auto first_positive =
      std::find_if(groups.begin(), groups.end(), [](const SpectralValue& g) { return g.value > 0.0; });
  if (first_positive == groups.end()) fail(ErrorCode::NoPositiveEigenvalue, "fibre spectrum has no positive eigenvalue");
  RigidityCheck out;
  out.mu1 = first_positive->value;
  out.sigma_mu1 = sigma_of_mu(BallFactorQuery{spec.m, spec.R, out.mu1, 0});
  out.threshold = 1.0 / spec.R;
  out.holds = out.sigma_mu1 >= out.threshold - 1e-12;
  return out;
}

double critical_length(double R) {
  if (!(R > 0.0) || !std::isfinite(R)) fail(ErrorCode::InvalidArgument, "R must be positive");
  // With x = R/L the condition reads x·tanh(x) = 1; x·tanh(x) is increasing.
  auto excess = [](double x) { return x * std::tanh(x) - 1.0; };
  double lo = 1.0, hi = 2.0;  // excess(1) = tanh(1) − 1 < 0 < 2·tanh(2) − 1
  while (true) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (excess(mid) < 0.0 ? lo : hi) = mid;
  }
  return R / (0.5 * (lo + hi));
}

std::string product_json(const ProductSpec& spec, const std::vector<SpectralValue>& spectrum,
                         const std::optional<RigidityCheck>& rigidity) {
  JsonWriter w;
  w.begin_object()
      .field("m", spec.m)
      .field("R", spec.R)
      .field("fiber", describe(spec.fiber))
      .field("num", spec.num)
      .key("eigenvalues")
      .begin_array();
  for (const auto& g : spectrum) w.begin_object().field("value", g.value).field("mult", g.multiplicity).end_object();
  w.end_array();
  if (rigidity) {
    w.field("mu1", rigidity->mu1)
        .field("sigma_mu1", rigidity->sigma_mu1)
        .field("threshold", rigidity->threshold)
        .field("rigidity_holds", rigidity->holds);
  } else {
    w.key("sigma_mu1").null().field("threshold", 1.0 / spec.R).key("rigidity_holds").null();
  }
  if (spec.m == 1 && std::holds_alternative<CircleFactor>(spec.fiber)) w.field("critical_L", critical_length(spec.R));
  w.end_object();
  return w.str();
}

}  // namespace steklov
