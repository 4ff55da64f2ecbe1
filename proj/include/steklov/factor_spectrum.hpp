#pragma once

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

namespace steklov {

/// An eigenvalue together with its multiplicity.
struct SpectralValue {
  double value = 0.0;
  int multiplicity = 1;
};

/// Round circle S¹(L) of radius L.
struct CircleFactor {
  double L = 1.0;
};

/// Flat torus S¹(L1) × S¹(L2).
struct TorusFactor {
  double L1 = 1.0;
  double L2 = 1.0;
};

/// User-supplied Laplace spectrum, ascending with repetition, starting at 0.
struct ListedFactor {
  std::vector<double> values;
};

using ClosedFactor = std::variant<CircleFactor, TorusFactor, ListedFactor>;

/// Throws InvalidArgument for non-positive lengths and InvalidSpectrumList for bad lists.
void validate(const ClosedFactor& factor);

bool is_finite(const ClosedFactor& factor);
std::string describe(const ClosedFactor& factor);

/// The first `groups` distinct Laplace eigenvalues of the closed factor with
/// their multiplicities (fewer if a listed spectrum runs out).
std::vector<SpectralValue> laplace_closed_factor_spectrum(const ClosedFactor& factor, std::size_t groups);

/// Collapses an ascending list into (value, multiplicity) pairs; values within
/// `rel_tol` relative distance are merged.
std::vector<SpectralValue> group_values(const std::vector<double>& ascending, double rel_tol = 1e-12);

/// Repeats each value by its multiplicity.
std::vector<double> expand(const std::vector<SpectralValue>& grouped);

}  // namespace steklov
