#include "steklov/development.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numbers>
#include <sstream>
#include <string>

#include <Eigen/Cholesky>

#include "steklov/errors.hpp"
#include "steklov/io.hpp"

namespace steklov {

namespace {

constexpr double kFrameTol = 1e-10;
constexpr double kFramesOk = 1e-8;

template <class F>
Vector rk4(const F& f, double t, const Vector& y, double dt) {
  const Vector k1 = f(t, y);
  const Vector k2 = f(t + 0.5 * dt, y + 0.5 * dt * k1);
  const Vector k3 = f(t + 0.5 * dt, y + 0.5 * dt * k2);
  const Vector k4 = f(t + dt, y + dt * k3);
  return y + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

int substeps(double span, int steps_per_unit) {
  return std::max(1, static_cast<int>(std::ceil(span * steps_per_unit - 1e-9)));
}

void require_frame(const MetricChart& chart, const Vector& x, const Matrix& frame) {
  if (frame.rows() != chart.dim() || frame.cols() != chart.dim()) {
    fail(ErrorCode::InvalidArgument, "frame must be a dim x dim matrix");
  }
  checked_metric(chart, x);
  if (frame_defect(chart, x, frame) > kFrameTol) {
    fail(ErrorCode::InvalidArgument, "initial frame is not orthonormal for the metric");
  }
}

void require_path(const SampledPath& path, int dim, const char* what) {
  if (path.t.size() < 2 || path.t.size() != path.x.size()) {
    fail(ErrorCode::InvalidArgument, std::string(what) + " needs at least two samples");
  }
  for (std::size_t n = 0; n < path.size(); ++n) {
    if (path.x[n].size() != dim) fail(ErrorCode::InvalidArgument, std::string(what) + " has the wrong dimension");
    if (n > 0 && path.t[n] < path.t[n - 1]) fail(ErrorCode::InvalidArgument, std::string(what) + " time is not monotone");
  }
}

// -Γ(xdot, E_c) for every column of E.
Matrix frame_rate(const Christoffel& gamma, const Vector& xdot, const Matrix& e) {
  Matrix out(e.rows(), e.cols());
  for (Eigen::Index c = 0; c < e.cols(); ++c) out.col(c) = -contract(gamma, xdot, e.col(c));
  return out;
}

void ensure_inside(const MetricChart& chart, const Vector& x) {
  if (!chart.contains(x)) fail(ErrorCode::LeftChartDomain, "path left the domain of chart " + chart.name());
}

double sample_defect(const MetricChart& chart, const FrameSample& s) {
  checked_metric(chart, s.x);
  return frame_defect(chart, s.x, s.frame);
}

TransportResult transport_once(const MetricChart& chart, const SampledPath& curve, const Matrix& frame0,
                               int steps_per_unit) {
  const int d = chart.dim();
  TransportResult out;
  Matrix e = frame0;
  out.samples.push_back({curve.t.front(), curve.x.front(), e});
  for (std::size_t n = 0; n + 1 < curve.size(); ++n) {
    const double span = curve.t[n + 1] - curve.t[n];
    if (span == 0.0) {
      if ((curve.x[n + 1] - curve.x[n]).norm() > 0.0) fail(ErrorCode::InvalidArgument, "curve jumps in position");
      continue;
    }
    const Vector xdot = (curve.x[n + 1] - curve.x[n]) / span;
    const int m = substeps(span, steps_per_unit);
    const double dt = span / m;
    auto position = [&](double s) -> Vector { return curve.x[n] + (s - curve.t[n]) * xdot; };
    auto rhs = [&](double s, const Vector& y) -> Vector {
      const Vector x = position(s);
      ensure_inside(chart, x);
      const Matrix rate = frame_rate(chart.christoffel(x), xdot, Eigen::Map<const Matrix>(y.data(), d, d));
      return Eigen::Map<const Vector>(rate.data(), d * d);
    };
    Vector y = Eigen::Map<const Vector>(e.data(), d * d);
    for (int i = 0; i < m; ++i) {
      const double s = curve.t[n] + i * dt;
      y = rk4(rhs, s, y, dt);
      const double s1 = i + 1 == m ? curve.t[n + 1] : s + dt;
      out.samples.push_back({s1, i + 1 == m ? curve.x[n + 1] : position(s1), Eigen::Map<const Matrix>(y.data(), d, d)});
    }
    e = out.samples.back().frame;
  }
  for (const auto& s : out.samples) out.max_frame_defect = std::max(out.max_frame_defect, sample_defect(chart, s));
  return out;
}

using SegmentProfile = std::function<Vector(std::size_t segment, double t)>;

TransportResult develop_once(const MetricChart& chart, const Vector& p, const Matrix& frame0,
                             const std::vector<double>& knots, const SegmentProfile& v, int steps_per_unit) {
  const int d = chart.dim();
  TransportResult out;
  Vector y(d + d * d);
  y.head(d) = p;
  y.tail(d * d) = Eigen::Map<const Vector>(frame0.data(), d * d);
  out.samples.push_back({knots.front(), p, frame0});
  for (std::size_t n = 0; n + 1 < knots.size(); ++n) {
    const double span = knots[n + 1] - knots[n];
    if (span == 0.0) continue;
    const int m = substeps(span, steps_per_unit);
    const double dt = span / m;
    auto rhs = [&](double s, const Vector& state) -> Vector {
      const Vector x = state.head(d);
      ensure_inside(chart, x);
      const Eigen::Map<const Matrix> e(state.data() + d, d, d);
      const Vector xdot = e * v(n, s);
      const Matrix rate = frame_rate(chart.christoffel(x), xdot, e);
      Vector dy(d + d * d);
      dy.head(d) = xdot;
      dy.tail(d * d) = Eigen::Map<const Vector>(rate.data(), d * d);
      return dy;
    };
    for (int i = 0; i < m; ++i) {
      const double s = knots[n] + i * dt;
      y = rk4(rhs, s, y, dt);
      ensure_inside(chart, y.head(d));
      out.samples.push_back({i + 1 == m ? knots[n + 1] : s + dt, y.head(d), Eigen::Map<const Matrix>(y.data() + d, d, d)});
    }
  }
  for (const auto& s : out.samples) out.max_frame_defect = std::max(out.max_frame_defect, sample_defect(chart, s));
  return out;
}

double final_gap(const TransportResult& a, const TransportResult& b) {
  const auto& x = a.samples.back();
  const auto& y = b.samples.back();
  return std::max((x.x - y.x).cwiseAbs().maxCoeff(), (x.frame - y.frame).cwiseAbs().maxCoeff());
}

double cross2(const Vector& a, const Vector& b) { return a[0] * b[1] - a[1] * b[0]; }

SampledPath lift_product(const ProductChart& total, const SampledPath& base_path, const Vector& fiber_start,
                         int steps_per_unit) {
  const int b = total.base_dim();
  const int f = total.dim() - b;
  require_path(base_path, b, "base path");
  if (fiber_start.size() != f) fail(ErrorCode::InvalidArgument, "fibre start has the wrong dimension");

  SampledPath lift;
  Vector y = fiber_start;
  auto join = [&](const Vector& x, const Vector& fy) {
    Vector z(b + f);
    z << x, fy;
    return z;
  };
  lift.t.push_back(base_path.t.front());
  lift.x.push_back(join(base_path.x.front(), y));
  ensure_inside(total, lift.x.back());
  for (std::size_t n = 0; n + 1 < base_path.size(); ++n) {
    const double span = base_path.t[n + 1] - base_path.t[n];
    if (span > 0.0) {
      const Vector xdot = (base_path.x[n + 1] - base_path.x[n]) / span;
      // Horizontal velocity (x', y') is g-orthogonal to every vertical vector (0, w).
      auto rhs = [&](double s, const Vector& fy) -> Vector {
        const Vector z = join(base_path.x[n] + (s - base_path.t[n]) * xdot, fy);
        const Matrix g = checked_metric(total, z);
        return -g.bottomRightCorner(f, f).ldlt().solve(g.bottomLeftCorner(f, b) * xdot);
      };
      const int m = substeps(span, steps_per_unit);
      const double dt = span / m;
      for (int i = 0; i < m; ++i) y = rk4(rhs, base_path.t[n] + i * dt, y, dt);
    }
    lift.t.push_back(base_path.t[n + 1]);
    lift.x.push_back(join(base_path.x[n + 1], y));
    ensure_inside(total, lift.x.back());
  }
  return lift;
}

SampledPath lift_strip(const StripCoverChart& total, const SampledPath& base_path, const Vector& fiber_start) {
  require_path(base_path, 2, "base path");
  if (fiber_start.size() != 1) fail(ErrorCode::InvalidArgument, "strip-cover fibre start is a single sheet index");
  auto check_point = [&](const Vector& x) {
    const double r = x.norm();
    if (r < total.r_in() * (1.0 - 1e-12) || r > total.r_out() * (1.0 + 1e-12)) {
      fail(ErrorCode::LeftChartDomain, "base path leaves the annulus");
    }
  };
  SampledPath lift;
  const Vector& x0 = base_path.x.front();
  check_point(x0);
  double theta = std::atan2(x0[1], x0[0]) + 2.0 * std::numbers::pi * std::round(fiber_start[0]);
  auto point = [](double th, double r) {
    Vector z(2);
    z << th, r;
    return z;
  };
  lift.t.push_back(base_path.t.front());
  lift.x.push_back(point(theta, x0.norm()));
  for (std::size_t n = 0; n + 1 < base_path.size(); ++n) {
    const Vector& a = base_path.x[n];
    const Vector& c = base_path.x[n + 1];
    check_point(c);
    // Closest approach of the straight segment to the hole.
    const Vector ac = c - a;
    const double len2 = ac.squaredNorm();
    const double s = len2 > 0.0 ? std::clamp(-a.dot(ac) / len2, 0.0, 1.0) : 0.0;
    if ((a + s * ac).norm() < total.r_in() * (1.0 - 1e-12)) {
      fail(ErrorCode::LeftChartDomain, "base path segment crosses the hole of the annulus");
    }
    // Exact angle swept by a segment that avoids the origin.
    theta += std::atan2(cross2(a, c), a.dot(c));
    lift.t.push_back(base_path.t[n + 1]);
    lift.x.push_back(point(theta, c.norm()));
  }
  return lift;
}

// Fourth-order central stencils.
template <class F>
Vector stencil(F&& f, double h) {
  return (8.0 * (f(h) - f(-h)) - (f(2.0 * h) - f(-2.0 * h))) / (12.0 * h);
}

Vector central_u(const VelocityField& v, double u, double t, double h) {
  return stencil([&](double s) { return v(u + s, t); }, h);
}

Vector central_t(const VelocityField& v, double u, double t, double h) {
  return stencil([&](double s) { return v(u, t + s); }, h);
}

Vector central_ut(const VelocityField& v, double u, double t, double h) {
  return stencil([&](double s) { return central_t(v, u + s, t, h); }, h);
}

constexpr double kFirstDiff = 1e-3;
constexpr double kMixedDiff = 1e-3;

// Curvature tensor in the frame: out(a,b,c,e) = R(E_a, E_b, E_c, E_e).
Riemann frame_curvature(const Riemann& r, const Matrix& e) {
  const int d = r.dim();
  Riemann tmp1(d), tmp2(d), tmp3(d), out(d);
  for (int a = 0; a < d; ++a)
    for (int q = 0; q < d; ++q)
      for (int s = 0; s < d; ++s)
        for (int w = 0; w < d; ++w) {
          double v = 0.0;
          for (int p = 0; p < d; ++p) v += e(p, a) * r(p, q, s, w);
          tmp1(a, q, s, w) = v;
        }
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int s = 0; s < d; ++s)
        for (int w = 0; w < d; ++w) {
          double v = 0.0;
          for (int q = 0; q < d; ++q) v += e(q, b) * tmp1(a, q, s, w);
          tmp2(a, b, s, w) = v;
        }
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int c = 0; c < d; ++c)
        for (int w = 0; w < d; ++w) {
          double v = 0.0;
          for (int s = 0; s < d; ++s) v += e(s, c) * tmp2(a, b, s, w);
          tmp3(a, b, c, w) = v;
        }
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int c = 0; c < d; ++c)
        for (int x = 0; x < d; ++x) {
          double v = 0.0;
          for (int w = 0; w < d; ++w) v += e(w, x) * tmp3(a, b, c, w);
          out(a, b, c, x) = v;
        }
  return out;
}

struct JacobiEnd {
  Vector U;
  Matrix X;
};

JacobiEnd jacobi_once(const MetricChart& chart, const Vector& p, const Matrix& frame0, const VelocityField& v,
                      double u, int steps) {
  const int d = chart.dim();
  const bool flat = chart.is_flat();
  // State layout: x | E | U | U' | X.
  const int ox = 0, oe = d, ou = d + d * d, op = ou + d, oX = op + d, size = oX + d * d;
  auto rhs = [&](double t, const Vector& y) -> Vector {
    const Vector x = y.segment(ox, d);
    ensure_inside(chart, x);
    const Eigen::Map<const Matrix> e(y.data() + oe, d, d);
    const Eigen::Map<const Matrix> X(y.data() + oX, d, d);
    const Vector U = y.segment(ou, d);
    const Vector vv = v(u, t);
    const Vector dtv = central_t(v, u, t, kFirstDiff);
    const Vector dutv = central_ut(v, u, t, kMixedDiff);
    const Vector xdot = e * vv;

    Vector dy = Vector::Zero(size);
    dy.segment(ox, d) = xdot;
    const Matrix rate = frame_rate(chart.christoffel(x), xdot, e);
    dy.segment(oe, d * d) = Eigen::Map<const Vector>(rate.data(), d * d);
    dy.segment(ou, d) = y.segment(op, d);

    Vector upp = dutv + X.transpose() * dtv;  // Σ_j ∂_t v_j X_{ji}
    Matrix xdot_rate = Matrix::Zero(d, d);
    if (!flat) {
      const Riemann rf = frame_curvature(chart.curvature(x), e);
      for (int i = 0; i < d; ++i) {
        double s = 0.0;
        for (int j = 0; j < d; ++j)
          for (int k = 0; k < d; ++k)
            for (int l = 0; l < d; ++l) s += vv[k] * vv[l] * rf(k, i, l, j) * U[j];
        upp[i] += s;
        for (int j = 0; j < d; ++j) {
          double r = 0.0;
          for (int k = 0; k < d; ++k)
            for (int l = 0; l < d; ++l) r += vv[l] * rf(i, j, l, k) * U[k];
          xdot_rate(i, j) = r;
        }
      }
    }
    dy.segment(op, d) = upp;
    dy.segment(oX, d * d) = Eigen::Map<const Vector>(xdot_rate.data(), d * d);
    return dy;
  };

  Vector y = Vector::Zero(size);
  y.segment(ox, d) = p;
  y.segment(oe, d * d) = Eigen::Map<const Vector>(frame0.data(), d * d);
  y.segment(op, d) = central_u(v, u, 0.0, kFirstDiff);
  const double dt = 1.0 / steps;
  for (int i = 0; i < steps; ++i) y = rk4(rhs, i * dt, y, dt);
  return {y.segment(ou, d), Eigen::Map<const Matrix>(y.data() + oX, d, d)};
}

}  // namespace

SampledPath read_path(std::istream& is, int dim) {
  auto paths = read_paths(is, dim);
  if (paths.size() != 1) fail(ErrorCode::MalformedInput, "expected exactly one path");
  return std::move(paths.front());
}

std::vector<SampledPath> read_paths(std::istream& is, int dim) {
  std::vector<SampledPath> out;
  SampledPath current;
  std::string line;
  int line_no = 0;
  auto flush = [&] {
    if (current.size() == 0) return;
    if (current.size() < 2) fail(ErrorCode::MalformedInput, "path needs at least two samples");
    out.push_back(std::move(current));
    current = SampledPath{};
  };
  while (std::getline(is, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;  // comment-only line
    }
    if (line.find_first_not_of(" \t\r") == std::string::npos) {
      flush();
      continue;
    }
    std::istringstream ls(line);
    double t;
    Vector x(dim);
    if (!(ls >> t)) fail(ErrorCode::MalformedInput, "line " + std::to_string(line_no) + ": missing time");
    for (int k = 0; k < dim; ++k) {
      if (!(ls >> x[k])) fail(ErrorCode::MalformedInput, "line " + std::to_string(line_no) + ": too few coordinates");
    }
    std::string extra;
    if (ls >> extra) fail(ErrorCode::MalformedInput, "line " + std::to_string(line_no) + ": too many columns");
    if (!std::isfinite(t) || !x.allFinite()) fail(ErrorCode::MalformedInput, "line " + std::to_string(line_no) + ": non-finite value");
    if (current.size() > 0 && t < current.t.back()) {
      fail(ErrorCode::MalformedInput, "line " + std::to_string(line_no) + ": time is not monotone");
    }
    current.t.push_back(t);
    current.x.push_back(x);
  }
  flush();
  if (out.empty()) fail(ErrorCode::MalformedInput, "no path samples found");
  return out;
}

TransportResult parallel_transport(const MetricChart& chart, const SampledPath& curve, const Matrix& frame0,
                                   int steps_per_unit) {
  require_path(curve, chart.dim(), "curve");
  require_frame(chart, curve.front(), frame0);
  TransportResult out = transport_once(chart, curve, frame0, 2 * steps_per_unit);
  out.refinement_gap = final_gap(out, transport_once(chart, curve, frame0, steps_per_unit));
  return out;
}

TransportResult develop(const MetricChart& chart, const Vector& p, const Matrix& frame0, const Profile& v, double t0,
                        double t1, int steps_per_unit) {
  if (!(t1 > t0)) fail(ErrorCode::InvalidArgument, "development interval is empty");
  require_frame(chart, p, frame0);
  const std::vector<double> knots{t0, t1};
  const SegmentProfile seg = [&](std::size_t, double t) { return v(t); };
  TransportResult out = develop_once(chart, p, frame0, knots, seg, 2 * steps_per_unit);
  out.refinement_gap = final_gap(out, develop_once(chart, p, frame0, knots, seg, steps_per_unit));
  return out;
}

TransportResult develop(const MetricChart& chart, const Vector& p, const Matrix& frame0, const SampledPath& v,
                        int steps_per_unit) {
  require_path(v, chart.dim(), "velocity profile");
  require_frame(chart, p, frame0);
  // Linear between samples; segment-wise evaluation honours jumps at repeated times.
  const SegmentProfile seg = [&](std::size_t n, double t) -> Vector {
    const double span = v.t[n + 1] - v.t[n];
    const double w = std::clamp((t - v.t[n]) / span, 0.0, 1.0);
    return (1.0 - w) * v.x[n] + w * v.x[n + 1];
  };
  TransportResult out = develop_once(chart, p, frame0, v.t, seg, 2 * steps_per_unit);
  out.refinement_gap = final_gap(out, develop_once(chart, p, frame0, v.t, seg, steps_per_unit));
  return out;
}

SampledPath horizontal_lift(const MetricChart& total, const SampledPath& base_path, const Vector& fiber_start,
                            int steps_per_unit) {
  if (const auto* product = dynamic_cast<const ProductChart*>(&total)) {
    return lift_product(*product, base_path, fiber_start, steps_per_unit);
  }
  if (const auto* strip = dynamic_cast<const StripCoverChart*>(&total)) {
    return lift_strip(*strip, base_path, fiber_start);
  }
  fail(ErrorCode::NotASubmersionChart, "chart " + total.name() + " is not a product or covering chart");
}

HolonomyResult holonomy_path_independence(const MetricChart& total, const SampledPath& path_a,
                                          const SampledPath& path_b, const Vector& fiber_start) {
  const auto* strip = dynamic_cast<const StripCoverChart*>(&total);
  const auto* product = dynamic_cast<const ProductChart*>(&total);
  if (!strip && !product) fail(ErrorCode::NotASubmersionChart, "chart " + total.name() + " is not a product or covering chart");
  const int base_dim = strip ? 2 : product->base_dim();
  require_path(path_a, base_dim, "first path");
  require_path(path_b, base_dim, "second path");
  auto close = [](const Vector& a, const Vector& b) { return (a - b).norm() <= 1e-9 * (1.0 + a.norm()); };
  if (!close(path_a.front(), path_b.front()) || !close(path_a.back(), path_b.back())) {
    fail(ErrorCode::InvalidArgument, "holonomy paths must share both endpoints");
  }

  const SampledPath lift_a = horizontal_lift(total, path_a, fiber_start);
  const SampledPath lift_b = horizontal_lift(total, path_b, fiber_start);
  HolonomyResult out;
  out.end_a = lift_a.back();
  out.end_b = lift_b.back();
  if (strip) {
    out.gap = std::abs(out.end_a[0] - out.end_b[0]);
    out.winding = out.gap / (2.0 * std::numbers::pi);
  } else {
    const int f = total.dim() - base_dim;
    out.gap = (out.end_a.tail(f) - out.end_b.tail(f)).norm();
  }
  const Matrix frame0 = orthonormal_frame(total, lift_a.front());
  out.max_frame_defect = std::max(transport_once(total, lift_a, frame0, kStepsPerUnit).max_frame_defect,
                                  transport_once(total, lift_b, frame0, kStepsPerUnit).max_frame_defect);
  out.frames_ok = out.max_frame_defect <= kFramesOk;
  return out;
}

JacobiResult jacobi_transport(const MetricChart& chart, const Vector& p, const Matrix& frame0,
                              const VelocityField& v, const std::vector<double>& us, int steps) {
  if (steps < 1) fail(ErrorCode::InvalidArgument, "steps must be positive");
  require_frame(chart, p, frame0);
  const double tol = chart.is_flat() ? 1e-4 : 1e-3;
  JacobiResult out;
  for (double u : us) {
    const JacobiEnd coarse = jacobi_once(chart, p, frame0, v, u, steps);
    const JacobiEnd fine = jacobi_once(chart, p, frame0, v, u, 2 * steps);
    const double gap = (coarse.U - fine.U).cwiseAbs().maxCoeff();
    if (!(gap <= tol)) {
      fail(ErrorCode::GridTooCoarse, "Richardson check failed at u=" + format_label(u) + " (gap " + format_label(gap) + ")");
    }
    out.refinement_gap = std::max(out.refinement_gap, gap);
    out.u.push_back(u);
    out.U_end.push_back(fine.U);
    out.X_end.push_back(fine.X);
  }
  return out;
}

Vector finite_difference_variation(const MetricChart& chart, const Vector& p, const Matrix& frame0,
                                   const VelocityField& v, double u, double delta, int steps) {
  auto endpoint = [&](double uu) {
    return develop(chart, p, frame0, [&](double t) { return v(uu, t); }, 0.0, 1.0, steps).samples.back();
  };
  const FrameSample mid = endpoint(u);
  const Vector diff = (endpoint(u + delta).x - endpoint(u - delta).x) / (2.0 * delta);
  return mid.frame.transpose() * chart.metric(mid.x) * diff;
}

GridVelocity GridVelocity::read(std::istream& is, int dim) {
  struct Row {
    double u, t;
    Vector v;
  };
  std::vector<Row> rows;
  std::string line;
  while (std::getline(is, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    Row r{0.0, 0.0, Vector(dim)};
    if (!(ls >> r.u >> r.t)) fail(ErrorCode::MalformedInput, "grid row needs u and t");
    for (int k = 0; k < dim; ++k) {
      if (!(ls >> r.v[k])) fail(ErrorCode::MalformedInput, "grid row has too few velocity components");
    }
    rows.push_back(std::move(r));
  }
  GridVelocity g;
  for (const auto& r : rows) {
    g.us_.push_back(r.u);
    g.ts_.push_back(r.t);
  }
  auto unique_sorted = [](std::vector<double>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  };
  unique_sorted(g.us_);
  unique_sorted(g.ts_);
  if (g.us_.size() < 2 || g.ts_.size() < 2 || rows.size() != g.us_.size() * g.ts_.size()) {
    fail(ErrorCode::MalformedInput, "velocity grid must be a full (u, t) grid with at least 2x2 points");
  }
  g.values_.assign(rows.size(), Vector());
  for (auto& r : rows) {
    const auto iu = static_cast<std::size_t>(std::lower_bound(g.us_.begin(), g.us_.end(), r.u) - g.us_.begin());
    const auto it = static_cast<std::size_t>(std::lower_bound(g.ts_.begin(), g.ts_.end(), r.t) - g.ts_.begin());
    auto& slot = g.values_[iu * g.ts_.size() + it];
    if (slot.size() != 0) fail(ErrorCode::MalformedInput, "duplicate grid point");
    slot = std::move(r.v);
  }
  return g;
}

Vector GridVelocity::operator()(double u, double t) const {
  auto locate = [](const std::vector<double>& axis, double s, std::size_t& i, double& w) {
    const auto it = std::upper_bound(axis.begin(), axis.end(), s);
    i = static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(it - axis.begin() - 1, 0,
                                                             static_cast<std::ptrdiff_t>(axis.size()) - 2));
    w = (s - axis[i]) / (axis[i + 1] - axis[i]);
  };
  std::size_t iu, it;
  double wu, wt;
  locate(us_, u, iu, wu);
  locate(ts_, t, it, wt);
  const std::size_t nt = ts_.size();
  const Vector& a = values_[iu * nt + it];
  const Vector& b = values_[iu * nt + it + 1];
  const Vector& c = values_[(iu + 1) * nt + it];
  const Vector& d = values_[(iu + 1) * nt + it + 1];
  return (1 - wu) * ((1 - wt) * a + wt * b) + wu * ((1 - wt) * c + wt * d);
}

}  // namespace steklov
