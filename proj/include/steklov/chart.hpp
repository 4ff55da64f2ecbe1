#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace steklov {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Christoffel symbols of the second kind: gamma[i](j, k) = Γ^i_{jk}.
using Christoffel = std::vector<Matrix>;

/// Covariant curvature tensor in chart coordinates,
/// R(a, b, c, d) = g(R(∂a, ∂b)∂c, ∂d) with R(X,Y) = ∇X∇Y − ∇Y∇X − ∇[X,Y].
class Riemann {
 public:
  explicit Riemann(int dim) : dim_(dim), data_(static_cast<std::size_t>(dim * dim * dim * dim), 0.0) {}

  int dim() const { return dim_; }
  double& operator()(int a, int b, int c, int d) { return data_[index(a, b, c, d)]; }
  double operator()(int a, int b, int c, int d) const { return data_[index(a, b, c, d)]; }
  bool is_zero() const;

 private:
  std::size_t index(int a, int b, int c, int d) const {
    return static_cast<std::size_t>(((a * dim_ + b) * dim_ + c) * dim_ + d);
  }
  int dim_;
  std::vector<double> data_;
};

/// Coordinate chart carrying a Riemannian metric.
///
/// Catalog charts supply closed-form Christoffel symbols and report flatness;
/// the defaults fall back to central differences of the metric (step 1e-4,
/// one Richardson extrapolation) and of the Christoffel symbols.
class MetricChart {
 public:
  virtual ~MetricChart() = default;

  virtual int dim() const = 0;
  virtual std::string name() const = 0;
  virtual bool contains(const Vector& x) const;
  virtual Matrix metric(const Vector& x) const = 0;
  virtual Christoffel christoffel(const Vector& x) const;
  virtual Riemann curvature(const Vector& x) const;
  /// True when the curvature vanishes identically (curvature() is then exact zero).
  virtual bool is_flat() const { return false; }
};

using ChartPtr = std::shared_ptr<const MetricChart>;

/// Product metric g_base ⊕ g_fiber in coordinates (x_base, x_fiber).
class ProductChart final : public MetricChart {
 public:
  ProductChart(ChartPtr base, ChartPtr fiber);

  int dim() const override;
  std::string name() const override;
  bool contains(const Vector& x) const override;
  Matrix metric(const Vector& x) const override;
  Christoffel christoffel(const Vector& x) const override;
  Riemann curvature(const Vector& x) const override;
  bool is_flat() const override;

  const MetricChart& base() const { return *base_; }
  const MetricChart& fiber() const { return *fiber_; }
  int base_dim() const { return base_->dim(); }

 private:
  ChartPtr base_;
  ChartPtr fiber_;
};

/// Universal cover of the annulus r_in ≤ |x| ≤ r_out: coordinates (θ, r) ∈ ℝ × [r_in, r_out]
/// with metric r²dθ² + dr².
class StripCoverChart final : public MetricChart {
 public:
  StripCoverChart(double r_in, double r_out);

  int dim() const override { return 2; }
  std::string name() const override { return "strip-cover"; }
  bool contains(const Vector& x) const override;
  Matrix metric(const Vector& x) const override;
  Christoffel christoffel(const Vector& x) const override;
  Riemann curvature(const Vector& x) const override;
  bool is_flat() const override { return true; }

  double r_in() const { return r_in_; }
  double r_out() const { return r_out_; }

 private:
  double r_in_;
  double r_out_;
};

ChartPtr flat_cartesian(int dim);
/// Euclidean plane restricted to the open disk |x| < radius.
ChartPtr flat_disk(double radius);
/// Circle S¹(L) in its angle coordinate: metric L²dφ².
ChartPtr circle_chart(double L);
/// Polar coordinates (r, θ), r > 0, metric dr² + r²dθ².
ChartPtr flat_polar();
ChartPtr product_chart(ChartPtr base, ChartPtr fiber);
ChartPtr strip_cover(double r_in, double r_out);
/// Unit sphere in (θ, φ), 0 < θ < π: metric dθ² + sin²θ dφ². Christoffels by finite differences.
ChartPtr sphere_chart();
/// Arbitrary smooth metric; Christoffels and curvature by finite differences.
ChartPtr user_chart(int dim, std::string name, std::function<Matrix(const Vector&)> metric,
                    std::function<bool(const Vector&)> domain = {});

/// Catalog lookup by CLI name: flat-cartesian, flat-polar, product-disk-circle,
/// strip-cover, sphere. Throws InvalidArgument for unknown names.
ChartPtr chart_by_name(const std::string& name);

/// Metric at x after checking the chart domain (LeftChartDomain) and positive
/// definiteness (MetricDegenerate).
Matrix checked_metric(const MetricChart& chart, const Vector& x);

/// Gram–Schmidt of the coordinate basis with respect to g(x); columns are the frame vectors.
Matrix orthonormal_frame(const MetricChart& chart, const Vector& x);

/// max |EᵀgE − I|.
double frame_defect(const MetricChart& chart, const Vector& x, const Matrix& frame);

/// Γ^i_{jk} a^j b^k as a vector.
Vector contract(const Christoffel& gamma, const Vector& a, const Vector& b);

}  // namespace steklov
