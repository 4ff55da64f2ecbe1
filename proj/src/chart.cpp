#include "steklov/chart.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Cholesky>
#include <Eigen/LU>

#include "steklov/errors.hpp"
#include "steklov/io.hpp"

namespace steklov {

namespace {

constexpr double kMetricStep = 1e-4;
constexpr double kChristoffelStep = 1e-3;

Christoffel zero_christoffel(int d) { return Christoffel(static_cast<std::size_t>(d), Matrix::Zero(d, d)); }

// Central difference along coordinate l with one Richardson extrapolation.
template <class F>
auto richardson_derivative(F&& f, const Vector& x, int l, double step) {
  auto central = [&](double s) {
    Vector xp = x, xm = x;
    xp[l] += s;
    xm[l] -= s;
    return ((f(xp) - f(xm)) / (2.0 * s)).eval();
  };
  return ((4.0 * central(0.5 * step) - central(step)) / 3.0).eval();
}

class ConstantChart final : public MetricChart {
 public:
  ConstantChart(std::string name, Matrix g, double domain_radius)
      : name_(std::move(name)), g_(std::move(g)), radius_(domain_radius) {}

  int dim() const override { return static_cast<int>(g_.rows()); }
  std::string name() const override { return name_; }
  bool contains(const Vector& x) const override {
    return x.size() == g_.rows() && x.allFinite() && (radius_ <= 0.0 || x.norm() < radius_);
  }
  Matrix metric(const Vector&) const override { return g_; }
  Christoffel christoffel(const Vector&) const override { return zero_christoffel(dim()); }
  Riemann curvature(const Vector&) const override { return Riemann(dim()); }
  bool is_flat() const override { return true; }

 private:
  std::string name_;
  Matrix g_;
  double radius_;
};

class PolarChart final : public MetricChart {
 public:
  int dim() const override { return 2; }
  std::string name() const override { return "flat-polar"; }
  bool contains(const Vector& x) const override { return x.size() == 2 && x.allFinite() && x[0] > 0.0; }
  Matrix metric(const Vector& x) const override {
    Matrix g = Matrix::Identity(2, 2);
    g(1, 1) = x[0] * x[0];
    return g;
  }
  Christoffel christoffel(const Vector& x) const override {
    Christoffel gamma = zero_christoffel(2);
    gamma[0](1, 1) = -x[0];
    gamma[1](0, 1) = gamma[1](1, 0) = 1.0 / x[0];
    return gamma;
  }
  Riemann curvature(const Vector&) const override { return Riemann(2); }
  bool is_flat() const override { return true; }
};

class FunctionChart final : public MetricChart {
 public:
  FunctionChart(int dim, std::string name, std::function<Matrix(const Vector&)> metric,
                std::function<bool(const Vector&)> domain)
      : dim_(dim), name_(std::move(name)), metric_(std::move(metric)), domain_(std::move(domain)) {}

  int dim() const override { return dim_; }
  std::string name() const override { return name_; }
  bool contains(const Vector& x) const override {
    return x.size() == dim_ && x.allFinite() && (!domain_ || domain_(x));
  }
  Matrix metric(const Vector& x) const override { return metric_(x); }

 private:
  int dim_;
  std::string name_;
  std::function<Matrix(const Vector&)> metric_;
  std::function<bool(const Vector&)> domain_;
};

}  // namespace

bool Riemann::is_zero() const {
  for (double v : data_) {
    if (v != 0.0) return false;
  }
  return true;
}

bool MetricChart::contains(const Vector& x) const { return x.size() == dim() && x.allFinite(); }

Christoffel MetricChart::christoffel(const Vector& x) const {
  const int d = dim();
  std::vector<Matrix> dg;  // dg[l] = ∂_l g
  for (int l = 0; l < d; ++l) {
    dg.push_back(richardson_derivative([this](const Vector& y) { return metric(y); }, x, l, kMetricStep));
  }
  const Matrix ginv = metric(x).inverse();
  Christoffel gamma = zero_christoffel(d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      for (int k = 0; k < d; ++k) {
        double s = 0.0;
        for (int l = 0; l < d; ++l) s += ginv(i, l) * (dg[j](l, k) + dg[k](l, j) - dg[l](j, k));
        gamma[i](j, k) = 0.5 * s;
      }
    }
  }
  return gamma;
}

Riemann MetricChart::curvature(const Vector& x) const {
  const int d = dim();
  Riemann out(d);
  if (is_flat()) return out;

  // Christoffels flattened so they can be differenced as one vector.
  auto flat = [this, d](const Vector& y) {
    const Christoffel g = christoffel(y);
    Vector v(d * d * d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k) v[(i * d + j) * d + k] = g[static_cast<std::size_t>(i)](j, k);
    return v;
  };
  std::vector<Vector> dgamma;  // dgamma[l] = ∂_l Γ
  for (int l = 0; l < d; ++l) dgamma.push_back(richardson_derivative(flat, x, l, kChristoffelStep));
  const Christoffel gamma = christoffel(x);
  auto G = [&](int i, int j, int k) { return gamma[static_cast<std::size_t>(i)](j, k); };
  auto dG = [&](int l, int i, int j, int k) { return dgamma[static_cast<std::size_t>(l)][(i * d + j) * d + k]; };
  const Matrix g = metric(x);

  // R^i_{jkl} = ∂_kΓ^i_{lj} − ∂_lΓ^i_{kj} + Γ^i_{km}Γ^m_{lj} − Γ^i_{lm}Γ^m_{kj}  (R(∂k,∂l)∂j = R^i_{jkl}∂i)
  std::vector<double> mixed(static_cast<std::size_t>(d * d * d * d), 0.0);
  auto M = [&](int i, int j, int k, int l) -> double& {
    return mixed[static_cast<std::size_t>(((i * d + j) * d + k) * d + l)];
  };
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) {
          double v = dG(k, i, l, j) - dG(l, i, k, j);
          for (int m = 0; m < d; ++m) v += G(i, k, m) * G(m, l, j) - G(i, l, m) * G(m, k, j);
          M(i, j, k, l) = v;
        }
  // R(a,b,c,e) = g(R(∂a,∂b)∂c, ∂e) = g_{ei} R^i_{cab}
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int c = 0; c < d; ++c)
        for (int e = 0; e < d; ++e) {
          double v = 0.0;
          for (int i = 0; i < d; ++i) v += g(e, i) * M(i, c, a, b);
          out(a, b, c, e) = v;
        }
  return out;
}

ProductChart::ProductChart(ChartPtr base, ChartPtr fiber) : base_(std::move(base)), fiber_(std::move(fiber)) {
  if (!base_ || !fiber_) fail(ErrorCode::InvalidArgument, "product chart needs two factors");
}

int ProductChart::dim() const { return base_->dim() + fiber_->dim(); }

std::string ProductChart::name() const { return "product(" + base_->name() + "," + fiber_->name() + ")"; }

bool ProductChart::contains(const Vector& x) const {
  if (x.size() != dim()) return false;
  return base_->contains(x.head(base_->dim())) && fiber_->contains(x.tail(fiber_->dim()));
}

Matrix ProductChart::metric(const Vector& x) const {
  const int b = base_->dim(), f = fiber_->dim();
  Matrix g = Matrix::Zero(b + f, b + f);
  g.topLeftCorner(b, b) = base_->metric(x.head(b));
  g.bottomRightCorner(f, f) = fiber_->metric(x.tail(f));
  return g;
}

Christoffel ProductChart::christoffel(const Vector& x) const {
  const int b = base_->dim(), f = fiber_->dim();
  Christoffel out = zero_christoffel(b + f);
  const Christoffel gb = base_->christoffel(x.head(b));
  const Christoffel gf = fiber_->christoffel(x.tail(f));
  for (int i = 0; i < b; ++i) out[static_cast<std::size_t>(i)].topLeftCorner(b, b) = gb[static_cast<std::size_t>(i)];
  for (int i = 0; i < f; ++i) {
    out[static_cast<std::size_t>(b + i)].bottomRightCorner(f, f) = gf[static_cast<std::size_t>(i)];
  }
  return out;
}

Riemann ProductChart::curvature(const Vector& x) const {
  const int b = base_->dim(), f = fiber_->dim();
  Riemann out(b + f);
  if (is_flat()) return out;
  const Riemann rb = base_->curvature(x.head(b));
  const Riemann rf = fiber_->curvature(x.tail(f));
  for (int p = 0; p < b; ++p)
    for (int q = 0; q < b; ++q)
      for (int r = 0; r < b; ++r)
        for (int s = 0; s < b; ++s) out(p, q, r, s) = rb(p, q, r, s);
  for (int p = 0; p < f; ++p)
    for (int q = 0; q < f; ++q)
      for (int r = 0; r < f; ++r)
        for (int s = 0; s < f; ++s) out(b + p, b + q, b + r, b + s) = rf(p, q, r, s);
  return out;
}

bool ProductChart::is_flat() const { return base_->is_flat() && fiber_->is_flat(); }

StripCoverChart::StripCoverChart(double r_in, double r_out) : r_in_(r_in), r_out_(r_out) {
  if (!(r_in > 0.0 && r_in < r_out)) fail(ErrorCode::InvalidArgument, "strip cover needs 0 < r_in < r_out");
}

bool StripCoverChart::contains(const Vector& x) const {
  constexpr double slack = 1e-12;
  return x.size() == 2 && x.allFinite() && x[1] >= r_in_ * (1.0 - slack) && x[1] <= r_out_ * (1.0 + slack);
}

Matrix StripCoverChart::metric(const Vector& x) const {
  Matrix g = Matrix::Identity(2, 2);
  g(0, 0) = x[1] * x[1];
  return g;
}

Christoffel StripCoverChart::christoffel(const Vector& x) const {
  Christoffel gamma = zero_christoffel(2);
  gamma[0](0, 1) = gamma[0](1, 0) = 1.0 / x[1];
  gamma[1](0, 0) = -x[1];
  return gamma;
}

Riemann StripCoverChart::curvature(const Vector&) const { return Riemann(2); }

ChartPtr flat_cartesian(int dim) {
  if (dim < 1) fail(ErrorCode::InvalidArgument, "chart dimension must be positive");
  return std::make_shared<ConstantChart>("flat-cartesian", Matrix::Identity(dim, dim), 0.0);
}

ChartPtr flat_disk(double radius) {
  if (!(radius > 0.0)) fail(ErrorCode::InvalidArgument, "disk radius must be positive");
  return std::make_shared<ConstantChart>("disk(" + format_label(radius) + ")", Matrix::Identity(2, 2), radius);
}

ChartPtr circle_chart(double L) {
  if (!(L > 0.0)) fail(ErrorCode::InvalidArgument, "circle radius must be positive");
  return std::make_shared<ConstantChart>("circle(" + format_label(L) + ")", Matrix::Constant(1, 1, L * L), 0.0);
}

ChartPtr flat_polar() { return std::make_shared<PolarChart>(); }

ChartPtr product_chart(ChartPtr base, ChartPtr fiber) {
  return std::make_shared<ProductChart>(std::move(base), std::move(fiber));
}

ChartPtr strip_cover(double r_in, double r_out) { return std::make_shared<StripCoverChart>(r_in, r_out); }

ChartPtr sphere_chart() {
  return user_chart(
      2, "sphere",
      [](const Vector& x) {
        Matrix g = Matrix::Identity(2, 2);
        g(1, 1) = std::sin(x[0]) * std::sin(x[0]);
        return g;
      },
      [](const Vector& x) { return x[0] > 0.0 && x[0] < std::numbers::pi; });
}

ChartPtr user_chart(int dim, std::string name, std::function<Matrix(const Vector&)> metric,
                    std::function<bool(const Vector&)> domain) {
  if (dim < 1) fail(ErrorCode::InvalidArgument, "chart dimension must be positive");
  if (!metric) fail(ErrorCode::InvalidArgument, "user chart needs a metric function");
  return std::make_shared<FunctionChart>(dim, std::move(name), std::move(metric), std::move(domain));
}

ChartPtr chart_by_name(const std::string& name) {
  if (name == "flat-cartesian") return flat_cartesian(2);
  if (name == "flat-polar") return flat_polar();
  if (name == "product-disk-circle") return product_chart(flat_disk(1.0), circle_chart(1.0));
  if (name == "strip-cover") return strip_cover(1.0, 2.0);
  if (name == "sphere") return sphere_chart();
  fail(ErrorCode::InvalidArgument, "unknown chart '" + name + "'");
}

Matrix checked_metric(const MetricChart& chart, const Vector& x) {
  if (!chart.contains(x)) fail(ErrorCode::LeftChartDomain, "point left the domain of chart " + chart.name());
  const Matrix g = chart.metric(x);
  if (g.rows() != chart.dim() || g.cols() != chart.dim() || !g.allFinite()) {
    fail(ErrorCode::MetricDegenerate, "metric has wrong shape or non-finite entries");
  }
  if ((g - g.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + g.cwiseAbs().maxCoeff())) {
    fail(ErrorCode::MetricDegenerate, "metric is not symmetric");
  }
  Eigen::LLT<Matrix> llt(g);
  if (llt.info() != Eigen::Success) fail(ErrorCode::MetricDegenerate, "metric is not positive definite");
  return g;
}

Matrix orthonormal_frame(const MetricChart& chart, const Vector& x) {
  const Matrix g = checked_metric(chart, x);
  const int d = chart.dim();
  Matrix e = Matrix::Identity(d, d);
  for (int c = 0; c < d; ++c) {
    for (int p = 0; p < c; ++p) e.col(c) -= (e.col(p).dot(g * e.col(c))) * e.col(p);
    e.col(c) /= std::sqrt(e.col(c).dot(g * e.col(c)));
  }
  return e;
}

double frame_defect(const MetricChart& chart, const Vector& x, const Matrix& frame) {
  const Matrix g = chart.metric(x);
  return (frame.transpose() * g * frame - Matrix::Identity(frame.cols(), frame.cols())).cwiseAbs().maxCoeff();
}

Vector contract(const Christoffel& gamma, const Vector& a, const Vector& b) {
  Vector out(static_cast<Eigen::Index>(gamma.size()));
  for (std::size_t i = 0; i < gamma.size(); ++i) out[static_cast<Eigen::Index>(i)] = a.dot(gamma[i] * b);
  return out;
}

}  // namespace steklov
