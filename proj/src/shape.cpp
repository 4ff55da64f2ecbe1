#include "steklov/shape.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "steklov/errors.hpp"
#include "steklov/io.hpp"

namespace steklov {

namespace {

constexpr double kPi = std::numbers::pi;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

double cross(const Point2& a, const Point2& b) { return a.x() * b.y() - a.y() * b.x(); }

double segment_distance(const Point2& p, const Point2& a, const Point2& b) {
  const Point2 ab = b - a;
  const double len2 = ab.squaredNorm();
  double t = len2 > 0.0 ? (p - a).dot(ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return (p - (a + t * ab)).norm();
}

int orientation(const Point2& a, const Point2& b, const Point2& c) {
  const double v = cross(b - a, c - a);
  if (v > 0.0) return 1;
  if (v < 0.0) return -1;
  return 0;
}

bool on_segment(const Point2& a, const Point2& b, const Point2& p) {
  return std::min(a.x(), b.x()) <= p.x() && p.x() <= std::max(a.x(), b.x()) &&
         std::min(a.y(), b.y()) <= p.y() && p.y() <= std::max(a.y(), b.y());
}

bool segments_intersect(const Point2& p1, const Point2& p2, const Point2& q1, const Point2& q2) {
  const int o1 = orientation(p1, p2, q1);
  const int o2 = orientation(p1, p2, q2);
  const int o3 = orientation(q1, q2, p1);
  const int o4 = orientation(q1, q2, p2);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(p1, p2, q1)) return true;
  if (o2 == 0 && on_segment(p1, p2, q2)) return true;
  if (o3 == 0 && on_segment(q1, q2, p1)) return true;
  if (o4 == 0 && on_segment(q1, q2, p2)) return true;
  return false;
}

bool point_in_polygon(const std::vector<Point2>& poly, const Point2& p) {
  bool inside = false;
  const std::size_t n = poly.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point2& a = poly[i];
    const Point2& b = poly[j];
    if ((a.y() > p.y()) != (b.y() > p.y())) {
      const double x = (b.x() - a.x()) * (p.y() - a.y()) / (b.y() - a.y()) + a.x();
      if (p.x() < x) inside = !inside;
    }
  }
  return inside;
}

std::vector<Point2> rectangle_vertices(const Rectangle& r) {
  return {Point2(0.0, 0.0), Point2(r.width, 0.0), Point2(r.width, r.height), Point2(0.0, r.height)};
}

double polygon_boundary_distance(const std::vector<Point2>& poly, const Point2& p) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < poly.size(); ++i) {
    best = std::min(best, segment_distance(p, poly[i], poly[(i + 1) % poly.size()]));
  }
  return best;
}

double wrap_angle(double a) {
  while (a > kPi) a -= 2.0 * kPi;
  while (a <= -kPi) a += 2.0 * kPi;
  return a;
}

double mid_angle(double ta, double tb) { return ta + 0.5 * wrap_angle(tb - ta); }

}  // namespace

double signed_area(const std::vector<Point2>& polygon) {
  double twice = 0.0;
  for (std::size_t i = 0; i < polygon.size(); ++i) {
    twice += cross(polygon[i], polygon[(i + 1) % polygon.size()]);
  }
  return 0.5 * twice;
}

bool is_simple(const std::vector<Point2>& polygon) {
  const std::size_t n = polygon.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (polygon[i] == polygon[j]) return false;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    const Point2& a = polygon[i];
    const Point2& b = polygon[(i + 1) % n];
    for (std::size_t j = i + 1; j < n; ++j) {
      // Adjacent edges share a vertex by construction.
      if (j == i + 1 || (i == 0 && j == n - 1)) continue;
      if (segments_intersect(a, b, polygon[j], polygon[(j + 1) % n])) return false;
    }
  }
  return true;
}

double perturbed_radius(const PerturbedDisk& shape, double theta) {
  return 1.0 + shape.eps * std::cos(shape.k * theta);
}

void validate(const DomainShape& shape) {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      fail(ErrorCode::InvalidShape, std::string(name) + " must be positive and finite");
    }
  };
  std::visit(overloaded{
                 [&](const Disk& s) { positive(s.radius, "radius"); },
                 [&](const Ellipse& s) {
                   positive(s.a, "a");
                   positive(s.b, "b");
                 },
                 [&](const Rectangle& s) {
                   positive(s.width, "width");
                   positive(s.height, "height");
                 },
                 [&](const Annulus& s) {
                   positive(s.r_in, "r_in");
                   positive(s.r_out, "r_out");
                   if (!(s.r_in < s.r_out)) fail(ErrorCode::InvalidShape, "annulus needs r_in < r_out");
                 },
                 [&](const Polygon& s) {
                   for (const auto& v : s.vertices) {
                     if (!v.allFinite()) fail(ErrorCode::InvalidShape, "polygon vertex is not finite");
                   }
                   if (!is_simple(s.vertices)) fail(ErrorCode::NonSimplePolygon, "polygon is not simple");
                   if (!(signed_area(s.vertices) > 0.0)) {
                     fail(ErrorCode::InvalidShape, "polygon must be counter-clockwise");
                   }
                 },
                 [&](const PerturbedDisk& s) {
                   if (s.k < 1) fail(ErrorCode::InvalidShape, "perturbation frequency k must be >= 1");
                   const double limit = 1.0 / (1.0 + double(s.k) * s.k);
                   if (!(std::abs(s.eps) < limit)) {
                     fail(ErrorCode::InvalidShape, "need |eps| < 1/(1+k^2) for a star-shaped boundary");
                   }
                 },
             },
             shape);
}

std::string kind_name(const DomainShape& shape) {
  return std::visit(overloaded{
                        [](const Disk&) { return std::string("disk"); },
                        [](const Ellipse&) { return std::string("ellipse"); },
                        [](const Rectangle&) { return std::string("rectangle"); },
                        [](const Annulus&) { return std::string("annulus"); },
                        [](const Polygon&) { return std::string("polygon"); },
                        [](const PerturbedDisk&) { return std::string("perturbed-disk"); },
                    },
                    shape);
}

std::string describe(const DomainShape& shape) {
  std::ostringstream os;
  os << kind_name(shape) << '(';
  std::visit(overloaded{
                 [&](const Disk& s) { os << "radius=" << format_label(s.radius); },
                 [&](const Ellipse& s) { os << "a=" << format_label(s.a) << ",b=" << format_label(s.b); },
                 [&](const Rectangle& s) {
                   os << "w=" << format_label(s.width) << ",h=" << format_label(s.height);
                 },
                 [&](const Annulus& s) {
                   os << "r_in=" << format_label(s.r_in) << ",r_out=" << format_label(s.r_out);
                 },
                 [&](const Polygon& s) { os << "n=" << s.vertices.size(); },
                 [&](const PerturbedDisk& s) { os << "eps=" << format_label(s.eps) << ",k=" << s.k; },
             },
             shape);
  os << ')';
  return os.str();
}

double exact_area(const DomainShape& shape) {
  return std::visit(overloaded{
                        [](const Disk& s) { return kPi * s.radius * s.radius; },
                        [](const Ellipse& s) { return kPi * s.a * s.b; },
                        [](const Rectangle& s) { return s.width * s.height; },
                        [](const Annulus& s) { return kPi * (s.r_out * s.r_out - s.r_in * s.r_in); },
                        [](const Polygon& s) { return signed_area(s.vertices); },
                        // (1/2)∫(1 + eps cos kθ)² dθ
                        [](const PerturbedDisk& s) { return kPi * (1.0 + 0.5 * s.eps * s.eps); },
                    },
                    shape);
}

double inradius(const DomainShape& shape) {
  return std::visit(
      overloaded{
          [](const Disk& s) { return s.radius; },
          [](const Ellipse& s) { return std::min(s.a, s.b); },
          [](const Rectangle& s) { return 0.5 * std::min(s.width, s.height); },
          [](const Annulus& s) { return 0.5 * (s.r_out - s.r_in); },
          [](const PerturbedDisk& s) { return 1.0 - std::abs(s.eps); },
          [](const Polygon& s) {
            const auto& v = s.vertices;
            Point2 lo = v.front(), hi = v.front();
            for (const auto& p : v) {
              lo = lo.cwiseMin(p);
              hi = hi.cwiseMax(p);
            }
            constexpr int kGrid = 128;
            double best = 0.0;
            for (int i = 0; i <= kGrid; ++i) {
              for (int j = 0; j <= kGrid; ++j) {
                const Point2 p(lo.x() + (hi.x() - lo.x()) * i / kGrid, lo.y() + (hi.y() - lo.y()) * j / kGrid);
                if (point_in_polygon(v, p)) best = std::max(best, polygon_boundary_distance(v, p));
              }
            }
            return best;
          },
      },
      shape);
}

double boundary_distance(const DomainShape& shape, const Point2& p) {
  return std::visit(
      overloaded{
          [&](const Disk& s) { return std::abs(p.norm() - s.radius); },
          [&](const Annulus& s) { return std::min(std::abs(p.norm() - s.r_in), std::abs(p.norm() - s.r_out)); },
          [&](const Rectangle& s) { return polygon_boundary_distance(rectangle_vertices(s), p); },
          [&](const Polygon& s) { return polygon_boundary_distance(s.vertices, p); },
          // Implicit-function residuals; exact zero on the curve, first order nearby.
          [&](const Ellipse& s) {
            const double t = std::atan2(p.y() / s.b, p.x() / s.a);
            return (p - Point2(s.a * std::cos(t), s.b * std::sin(t))).norm();
          },
          [&](const PerturbedDisk& s) {
            const double t = std::atan2(p.y(), p.x());
            return std::abs(p.norm() - perturbed_radius(s, t));
          },
      },
      shape);
}

Point2 boundary_midpoint(const DomainShape& shape, const Point2& a, const Point2& b) {
  return std::visit(
      overloaded{
          [&](const Disk& s) {
            const double t = mid_angle(std::atan2(a.y(), a.x()), std::atan2(b.y(), b.x()));
            return Point2(s.radius * std::cos(t), s.radius * std::sin(t));
          },
          [&](const Annulus& s) {
            const double ra = a.norm();
            const double r = std::abs(ra - s.r_in) < std::abs(ra - s.r_out) ? s.r_in : s.r_out;
            const double t = mid_angle(std::atan2(a.y(), a.x()), std::atan2(b.y(), b.x()));
            return Point2(r * std::cos(t), r * std::sin(t));
          },
          [&](const Ellipse& s) {
            const double t =
                mid_angle(std::atan2(a.y() / s.b, a.x() / s.a), std::atan2(b.y() / s.b, b.x() / s.a));
            return Point2(s.a * std::cos(t), s.b * std::sin(t));
          },
          [&](const PerturbedDisk& s) {
            const double t = mid_angle(std::atan2(a.y(), a.x()), std::atan2(b.y(), b.x()));
            const double r = perturbed_radius(s, t);
            return Point2(r * std::cos(t), r * std::sin(t));
          },
          [&](const Rectangle&) -> Point2 { return 0.5 * (a + b); },
          [&](const Polygon&) -> Point2 { return 0.5 * (a + b); },
      },
      shape);
}

Polygon transformed(const Polygon& polygon, double angle, const Point2& shift) {
  const Eigen::Matrix2d rot = Eigen::Rotation2Dd(angle).toRotationMatrix();
  Polygon out;
  out.vertices.reserve(polygon.vertices.size());
  for (const auto& v : polygon.vertices) out.vertices.push_back(rot * v + shift);
  return out;
}

}  // namespace steklov
