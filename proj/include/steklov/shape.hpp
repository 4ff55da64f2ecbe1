#pragma once

#include <string>
#include <variant>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace steklov {

using Point2 = Eigen::Vector2d;

struct Disk {
  double radius = 1.0;
};

/// Axis-aligned ellipse x²/a² + y²/b² = 1.
struct Ellipse {
  double a = 1.0;
  double b = 1.0;
};

/// The box [0, width] × [0, height].
struct Rectangle {
  double width = 1.0;
  double height = 1.0;
};

struct Annulus {
  double r_in = 1.0;
  double r_out = 2.0;
};

/// Simple, counter-clockwise polygon.
struct Polygon {
  std::vector<Point2> vertices;
};

/// Star-shaped domain with boundary r(θ) = 1 + eps·cos(k·θ).
struct PerturbedDisk {
  double eps = 0.0;
  int k = 3;
};

using DomainShape = std::variant<Disk, Ellipse, Rectangle, Annulus, Polygon, PerturbedDisk>;

/// Throws InvalidShape / NonSimplePolygon when the shape parameters are out of range.
void validate(const DomainShape& shape);

std::string kind_name(const DomainShape& shape);

/// Compact human-readable form, e.g. "ellipse(a=2,b=1)".
std::string describe(const DomainShape& shape);

/// Closed-form area of the exact (curved) domain.
double exact_area(const DomainShape& shape);

/// Radius of the largest inscribed disk (estimated on a grid for general polygons).
double inradius(const DomainShape& shape);

double signed_area(const std::vector<Point2>& polygon);
bool is_simple(const std::vector<Point2>& polygon);

/// Distance from p to the exact boundary curve of the shape.
double boundary_distance(const DomainShape& shape, const Point2& p);

/// Point on the exact boundary halfway (in curve parameter) between two boundary points.
Point2 boundary_midpoint(const DomainShape& shape, const Point2& a, const Point2& b);

/// Radius of the perturbed-disk boundary at angle theta.
double perturbed_radius(const PerturbedDisk& shape, double theta);

/// Rigid motion of a polygon: rotate by angle about the origin, then translate.
Polygon transformed(const Polygon& polygon, double angle, const Point2& shift);

}  // namespace steklov
