// Deterministic test fixtures: a portable RNG and synthetic shapes.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "vshape/constraints.hpp"
#include "vshape/types.hpp"

namespace vshape::testing {

// xorshift64*; portable and stable across standard libraries.
class TestRng {
 public:
  explicit TestRng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ull) {}

  std::uint64_t next() {
    state_ ^= state_ >> 12;
    state_ ^= state_ << 25;
    state_ ^= state_ >> 27;
    return state_ * 0x2545f4914f6cdd1dull;
  }

  double uniform(double lo, double hi) {
    const double u = static_cast<double>(next() >> 11) * 0x1.0p-53;
    return lo + u * (hi - lo);
  }

  Point point(int dim, double lo, double hi) {
    Point p = Point::zero(dim);
    for (int a = 0; a < dim; ++a) p[a] = uniform(lo, hi);
    return p;
  }

 private:
  std::uint64_t state_;
};

// Antialiased filled disk: 255 inside, 0 outside, 1-pixel gray ramp.
inline GrayImage disk_image(int size, double cx, double cy, double radius) {
  GrayImage img;
  img.width = img.height = size;
  img.pixels.resize(static_cast<std::size_t>(size) * size);
  for (int y = 0; y < size; ++y)
    for (int x = 0; x < size; ++x) {
      const double d = radius - std::hypot(x - cx, y - cy);  // positive inside
      img.at(x, y) = 255.0 * std::clamp(0.5 + d, 0.0, 1.0);
    }
  return img;
}

// Ring (an O): white between the two radii.
inline GrayImage ring_image(int size, double cx, double cy, double r_inner, double r_outer) {
  GrayImage img;
  img.width = img.height = size;
  img.pixels.resize(static_cast<std::size_t>(size) * size);
  for (int y = 0; y < size; ++y)
    for (int x = 0; x < size; ++x) {
      const double r = std::hypot(x - cx, y - cy);
      const double d = std::min(r - r_inner, r_outer - r);  // positive inside the ring
      img.at(x, y) = 255.0 * std::clamp(0.5 + d, 0.0, 1.0);
    }
  return img;
}

inline double segment_distance(double px, double py, double ax, double ay, double bx, double by) {
  const double vx = bx - ax, vy = by - ay;
  const double len2 = vx * vx + vy * vy;
  double t = len2 > 0.0 ? ((px - ax) * vx + (py - ay) * vy) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(px - (ax + t * vx), py - (ay + t * vy));
}

// Two crossed bars (an X).
inline GrayImage x_image(int size, double margin = 12.0, double half_width = 4.5) {
  GrayImage img;
  img.width = img.height = size;
  img.pixels.resize(static_cast<std::size_t>(size) * size);
  const double lo = margin;
  const double hi = size - 1 - margin;
  for (int y = 0; y < size; ++y)
    for (int x = 0; x < size; ++x) {
      const double d1 = segment_distance(x, y, lo, lo, hi, hi);
      const double d2 = segment_distance(x, y, lo, hi, hi, lo);
      const double d = half_width - std::min(d1, d2);  // positive inside
      img.at(x, y) = 255.0 * std::clamp(0.5 + d, 0.0, 1.0);
    }
  return img;
}

// Circle contour sampled as 2D boundary + inward normal constraints.
inline ConstraintSet circle_constraints(double cx, double cy, double radius, int count,
                                        double offset, double phase = 0.0) {
  ConstraintSet set;
  set.dim = 2;
  for (int i = 0; i < count; ++i) {
    const double ang = phase + 2.0 * M_PI * i / count;
    const double nx = std::cos(ang), ny = std::sin(ang);
    set.boundary.push_back({Point{cx + radius * nx, cy + radius * ny}, 0.0});
    set.normal.push_back(
        {Point{cx + (radius - offset) * nx, cy + (radius - offset) * ny}, 1.0});
    set.normal_of.push_back(i);
  }
  return set;
}

// Sphere sampled with a Fibonacci spiral; boundary + inward normals.
inline ConstraintSet sphere_constraints(double cx, double cy, double cz, double radius,
                                        int count, double offset) {
  ConstraintSet set;
  set.dim = 3;
  const double golden = M_PI * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < count; ++i) {
    const double z = 1.0 - 2.0 * (i + 0.5) / count;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double ang = golden * i;
    const double nx = r * std::cos(ang), ny = r * std::sin(ang), nz = z;
    set.boundary.push_back({Point{cx + radius * nx, cy + radius * ny, cz + radius * nz}, 0.0});
    set.normal.push_back({Point{cx + (radius - offset) * nx, cy + (radius - offset) * ny,
                                cz + (radius - offset) * nz},
                          1.0});
    set.normal_of.push_back(i);
  }
  return set;
}

}  // namespace vshape::testing
