#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

#include "steklov/chart.hpp"

namespace steklov {

/// Samples (t_n, x_n) of a path, t nondecreasing. Between samples the path is
/// linear in chart coordinates; a repeated t marks a jump.
struct SampledPath {
  std::vector<double> t;
  std::vector<Vector> x;

  std::size_t size() const { return t.size(); }
  const Vector& front() const { return x.front(); }
  const Vector& back() const { return x.back(); }
};

/// Reads `t x1 … xd` lines; '#' starts a comment. Throws MalformedInput.
SampledPath read_path(std::istream& is, int dim);

/// Like read_path, but blank lines separate consecutive paths.
std::vector<SampledPath> read_paths(std::istream& is, int dim);

struct FrameSample {
  double t = 0.0;
  Vector x;
  Matrix frame;  // columns are the transported vectors
};

struct TransportResult {
  std::vector<FrameSample> samples;
  double max_frame_defect = 0.0;  // max |EᵀgE − I| over samples
  double refinement_gap = 0.0;    // final-state change when the step count is doubled
};

inline constexpr int kStepsPerUnit = 1000;

/// Parallel transport of frame0 along the sampled curve: dE/dt + Γ(γ', E) = 0, RK4.
/// Throws InvalidArgument if frame0 is not g-orthonormal to 1e-10, LeftChartDomain,
/// MetricDegenerate.
TransportResult parallel_transport(const MetricChart& chart, const SampledPath& curve, const Matrix& frame0,
                                   int steps_per_unit = kStepsPerUnit);

using Profile = std::function<Vector(double t)>;

/// Development of a velocity profile: γ' = E(t)·v(t), γ(0) = p, with E the
/// frame transported along γ. Samples are returned at every RK4 step.
TransportResult develop(const MetricChart& chart, const Vector& p, const Matrix& frame0, const Profile& v, double t0,
                        double t1, int steps_per_unit = kStepsPerUnit);
TransportResult develop(const MetricChart& chart, const Vector& p, const Matrix& frame0, const SampledPath& v,
                        int steps_per_unit = kStepsPerUnit);

/// Horizontal lift of a base path starting at the given fibre point.
///
/// For a ProductChart the fibre coordinates y solve y' = −G_ff⁻¹·G_fb·x', which
/// keeps them constant. For the strip cover of the annulus the base path is in
/// Cartesian annulus coordinates, the lift is (θ, r) with θ unwound
/// continuously, and fiber_start[0] is the starting sheet index.
/// Throws NotASubmersionChart for other charts.
SampledPath horizontal_lift(const MetricChart& total, const SampledPath& base_path, const Vector& fiber_start,
                            int steps_per_unit = kStepsPerUnit);

struct HolonomyResult {
  double gap = 0.0;      // fibre-coordinate distance between the lifted endpoints
  double winding = 0.0;  // gap / 2π for the strip cover, 0 otherwise
  Vector end_a;
  Vector end_b;
  double max_frame_defect = 0.0;  // frames transported along both lifts
  bool frames_ok = false;
};

/// Lifts both base paths (which must share endpoints) from the same fibre point
/// and measures how far apart the lifted endpoints land.
HolonomyResult holonomy_path_independence(const MetricChart& total, const SampledPath& path_a,
                                          const SampledPath& path_b, const Vector& fiber_start);

/// A family of velocity profiles v(u, t) in the parallel frame.
using VelocityField = std::function<Vector(double u, double t)>;

struct JacobiResult {
  std::vector<double> u;
  std::vector<Vector> U_end;  // components of ∂Ψ/∂u at t = 1 in the transported frame
  std::vector<Matrix> X_end;
  double refinement_gap = 0.0;
};

/// Integrates, for each u, the Cauchy system for the variation field of the
/// developed family γ_u (t ∈ [0, 1]):
///   U″ᵢ = Σ v_k v_l R(E_k,E_i,E_l,E_j) U_j + ∂_u∂_t vᵢ + Σ ∂_t v_j X_{ji}
///   X′ᵢⱼ = Σ v_l R(E_i,E_j,E_l,E_k) U_k
/// with X(0) = 0, U(0) = 0, U′(0) = ∂_u v(u, 0). The derivatives of v are taken
/// by central differences and the curvature comes from the chart.
/// Throws GridTooCoarse when doubling the steps changes U(u,1) by more than 1e-4.
JacobiResult jacobi_transport(const MetricChart& chart, const Vector& p, const Matrix& frame0,
                              const VelocityField& v, const std::vector<double>& us,
                              int steps = kStepsPerUnit);

/// Central difference (γ_{u+δ}(1) − γ_{u−δ}(1)) / 2δ of developed endpoints,
/// expressed in the transported frame at γ_u(1).
Vector finite_difference_variation(const MetricChart& chart, const Vector& p, const Matrix& frame0,
                                   const VelocityField& v, double u, double delta = 1e-3,
                                   int steps = kStepsPerUnit);

/// v(u, t) sampled on a uniform (u, t) grid, bilinearly interpolated (and
/// linearly extrapolated past the grid edges).
class GridVelocity {
 public:
  /// Rows `u t v1 … vd`; the (u, t) pairs must form a full uniform grid.
  static GridVelocity read(std::istream& is, int dim);

  Vector operator()(double u, double t) const;
  const std::vector<double>& us() const { return us_; }

 private:
  std::vector<double> us_;
  std::vector<double> ts_;
  std::vector<Vector> values_;  // values_[iu * nt + it]
};

}  // namespace steklov
