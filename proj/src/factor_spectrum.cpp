#include "steklov/factor_spectrum.hpp"

#include <algorithm>
#include <cmath>

#include "steklov/errors.hpp"
#include "steklov/io.hpp"

namespace steklov {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

bool same_value(double a, double b, double rel_tol) {
  return std::abs(a - b) <= rel_tol * std::max(std::abs(a), std::abs(b));
}

std::vector<SpectralValue> torus_spectrum(const TorusFactor& t, std::size_t groups) {
  double bound = 4.0 / std::min(t.L1 * t.L1, t.L2 * t.L2);
  for (;;) {
    const auto kmax = static_cast<long>(std::floor(t.L1 * std::sqrt(bound)));
    const auto lmax = static_cast<long>(std::floor(t.L2 * std::sqrt(bound)));
    std::vector<double> values;
    for (long k = -kmax; k <= kmax; ++k) {
      for (long l = -lmax; l <= lmax; ++l) {
        const double mu = (k / t.L1) * (k / t.L1) + (l / t.L2) * (l / t.L2);
        if (mu <= bound) values.push_back(mu);
      }
    }
    std::sort(values.begin(), values.end());
    auto grouped = group_values(values);
    // The last group may be cut by the bound; require one spare group.
    if (grouped.size() > groups) {
      grouped.resize(groups);
      return grouped;
    }
    bound *= 2.0;
  }
}

}  // namespace

void validate(const ClosedFactor& factor) {
  std::visit(overloaded{
                 [](const CircleFactor& c) {
                   if (!(c.L > 0.0) || !std::isfinite(c.L)) fail(ErrorCode::InvalidArgument, "circle radius must be positive");
                 },
                 [](const TorusFactor& t) {
                   if (!(t.L1 > 0.0 && t.L2 > 0.0) || !std::isfinite(t.L1) || !std::isfinite(t.L2)) {
                     fail(ErrorCode::InvalidArgument, "torus radii must be positive");
                   }
                 },
                 [](const ListedFactor& l) {
                   if (l.values.empty()) fail(ErrorCode::InvalidSpectrumList, "spectrum list is empty");
                   if (l.values.front() != 0.0) fail(ErrorCode::InvalidSpectrumList, "spectrum list must start at 0");
                   for (std::size_t i = 0; i < l.values.size(); ++i) {
                     if (!(l.values[i] >= 0.0) || !std::isfinite(l.values[i])) {
                       fail(ErrorCode::InvalidSpectrumList, "spectrum list has a negative or non-finite entry");
                     }
                     if (i > 0 && l.values[i] < l.values[i - 1]) {
                       fail(ErrorCode::InvalidSpectrumList, "spectrum list is not ascending");
                     }
                   }
                 },
             },
             factor);
}

bool is_finite(const ClosedFactor& factor) { return std::holds_alternative<ListedFactor>(factor); }

std::string describe(const ClosedFactor& factor) {
  return std::visit(overloaded{
                        [](const CircleFactor& c) { return "circle(L=" + format_label(c.L) + ")"; },
                        [](const TorusFactor& t) {
                          return "flat-torus(L1=" + format_label(t.L1) + ",L2=" + format_label(t.L2) + ")";
                        },
                        [](const ListedFactor& l) { return "user-list(n=" + std::to_string(l.values.size()) + ")"; },
                    },
                    factor);
}

std::vector<SpectralValue> laplace_closed_factor_spectrum(const ClosedFactor& factor, std::size_t groups) {
  validate(factor);
  return std::visit(overloaded{
                        [&](const CircleFactor& c) {
                          std::vector<SpectralValue> out;
                          for (std::size_t k = 0; k < groups; ++k) {
                            const double f = static_cast<double>(k) / c.L;
                            out.push_back({f * f, k == 0 ? 1 : 2});
                          }
                          return out;
                        },
                        [&](const TorusFactor& t) { return torus_spectrum(t, groups); },
                        [&](const ListedFactor& l) {
                          auto grouped = group_values(l.values);
                          if (grouped.size() > groups) grouped.resize(groups);
                          return grouped;
                        },
                    },
                    factor);
}

std::vector<SpectralValue> group_values(const std::vector<double>& ascending, double rel_tol) {
  std::vector<SpectralValue> out;
  for (double v : ascending) {
    if (!out.empty() && same_value(out.back().value, v, rel_tol)) {
      ++out.back().multiplicity;
    } else {
      out.push_back({v, 1});
    }
  }
  return out;
}

std::vector<double> expand(const std::vector<SpectralValue>& grouped) {
  std::vector<double> out;
  for (const auto& g : grouped) out.insert(out.end(), static_cast<std::size_t>(g.multiplicity), g.value);
  return out;
}

}  // namespace steklov
