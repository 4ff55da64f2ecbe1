#pragma once

#include <optional>
#include <string>
#include <vector>

#include "steklov/factor_spectrum.hpp"

namespace steklov {

/// M = 𝔹ᵐ(R) × F, with F described by its Laplace spectrum.
struct ProductSpec {
  int m = 1;
  double R = 1.0;
  ClosedFactor fiber = ListedFactor{{0.0}};
  int num = 2;  // eigenvalues to emit, counted with multiplicity (σ₀ included)
};

/// Steklov spectrum of the product by separation of variables: every Laplace
/// eigenvalue μᵢ of F contributes the branch eigenvalues of Δf = μᵢf,
/// ∂f/∂ν = σf on the ball. Returns the smallest `num` values (with
/// multiplicity) as ascending (value, multiplicity) pairs.
std::vector<SpectralValue> product_steklov_spectrum(const ProductSpec& spec);

struct RigidityCheck {
  bool holds = false;
  double mu1 = 0.0;        // first positive Laplace eigenvalue of F
  double sigma_mu1 = 0.0;  // σ(μ₁) on the ball factor
  double threshold = 0.0;  // 1/R
};

/// σ(μ₁) ≥ 1/R (with 1e-12 slack). Throws NoPositiveEigenvalue if F has no positive eigenvalue.
RigidityCheck rigidity_condition(const ProductSpec& spec);

/// The radius L* of the circle fibre at which [−R, R] × S¹(L) stops satisfying
/// the rigidity condition: the root of (1/L)·tanh(R/L) = 1/R, found by bisection.
double critical_length(double R = 1.0);

std::string product_json(const ProductSpec& spec, const std::vector<SpectralValue>& spectrum,
                         const std::optional<RigidityCheck>& rigidity);

}  // namespace steklov
