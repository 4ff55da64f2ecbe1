#pragma once

namespace steklov {

/// Symmetry class of an eigenfunction on the interval [−R, R].
enum class Parity { Even, Odd };

/// σ(μ) problem Δf = μf on the ball 𝔹ᵐ(R) with ∂f/∂ν = σf on its boundary.
///
/// `branch` selects the separated mode: the parity (0 = even, 1 = odd) when
/// m = 1, the angular index k ≥ 0 when m = 2.
struct BallFactorQuery {
  int m = 1;
  double R = 1.0;
  double mu = 0.0;
  int branch = 0;
};

/// Throws InvalidArgument unless m ∈ {1, 2}, R > 0, μ ≥ 0 and the branch is valid.
void validate(const BallFactorQuery& query);

/// Closed forms on [−R, R]: √μ·tanh(√μR) (even) and √μ·coth(√μR) (odd).
double sigma_mu_interval(double R, double mu, Parity parity);

/// Angular mode k on the disk of radius R by RK4 shooting on the radial equation.
///
/// The equation g'' + g'/r − (k²/r² + μ)g = 0 is integrated in the variable
/// s = ln r from r₀ = 10⁻⁶R (regular series start) to R, either for (g, dg/ds)
/// or, when the solution grows too fast, for the logarithmic derivative
/// w = r·g'/g. The result is g'(R)/g(R), checked against a run with twice the
/// steps. Throws ShootingBlowup when the two runs disagree by more than 1e-9.
double sigma_mu_disk(double R, double mu, int k);

/// Independent evaluation of √μ·I_k'(√μR)/I_k(√μR) from the modified-Bessel power series.
double sigma_mu_disk_series(double R, double mu, int k);

/// Eigenvalue of the branch named in the query.
double ball_branch(const BallFactorQuery& query);

/// The first eigenvalue σ(μ): the infimum over branches of the quotient
/// ∫(‖∇f‖² + μf²) / ∫_∂ f².
double sigma_of_mu(const BallFactorQuery& query);

/// Index of the branch attaining σ(μ), found by comparing the two lowest branches.
int lowest_branch(const BallFactorQuery& query);

}  // namespace steklov
