#pragma once

#include <vector>

#include "steklov/shape.hpp"

namespace test_support {

inline steklov::Polygon l_shape() {
  return steklov::Polygon{{{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}}};
}

// Shapes exercised by the catalog-wide properties.
inline std::vector<steklov::DomainShape> catalog() {
  using namespace steklov;
  return {Disk{1.0}, Ellipse{2.0, 1.0}, Rectangle{1.0, 1.0}, Annulus{0.5, 1.0}, PerturbedDisk{0.05, 3}, l_shape()};
}

}  // namespace test_support
