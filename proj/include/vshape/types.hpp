// Core value types shared across the library: points in 2..5 dimensions,
// interpolation constraints, axis-aligned boxes, and the error hierarchy.
#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace vshape {

inline constexpr int kMinDim = 2;
inline constexpr int kMaxDim = 5;

// Hard cap on dense direct solves; larger systems are rejected up front.
inline constexpr std::size_t kMaxConstraints = 3000;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionMismatchError : Error {
  using Error::Error;
};

struct InsufficientConstraintsError : Error {
  using Error::Error;
};

struct DuplicateCenterError : Error {
  DuplicateCenterError(const std::string& msg, std::size_t a, std::size_t b)
      : Error(msg), first(a), second(b) {}
  std::size_t first = 0;
  std::size_t second = 0;
};

struct SingularSystemError : Error {
  SingularSystemError(const std::string& msg, std::size_t pivot_idx, double pivot_mag)
      : Error(msg), pivot_index(pivot_idx), pivot_magnitude(pivot_mag) {}
  std::size_t pivot_index = 0;
  double pivot_magnitude = 0.0;
};

struct EmptyShapeError : Error {
  using Error::Error;
};

struct InvalidNormalError : Error {
  using Error::Error;
};

struct BorderError : Error {
  using Error::Error;
};

struct FormatError : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

// Point in R^d, 2 <= d <= 5.  Fixed capacity keeps constraint arrays flat
// and cheap to scan during system assembly.
class Point {
 public:
  Point() = default;

  Point(std::initializer_list<double> coords) {
    if (coords.size() < static_cast<std::size_t>(kMinDim) ||
        coords.size() > static_cast<std::size_t>(kMaxDim)) {
      throw DimensionMismatchError("point dimension must be in [2,5], got " +
                                   std::to_string(coords.size()));
    }
    dim_ = static_cast<int>(coords.size());
    int i = 0;
    for (double c : coords) coords_[i++] = c;
  }

  static Point zero(int dim) {
    check_dim(dim);
    Point p;
    p.dim_ = dim;
    return p;
  }

  int dim() const { return dim_; }

  double operator[](int i) const { return coords_[i]; }
  double& operator[](int i) { return coords_[i]; }

  bool finite() const {
    for (int i = 0; i < dim_; ++i)
      if (!std::isfinite(coords_[i])) return false;
    return true;
  }

  friend bool operator==(const Point& a, const Point& b) {
    if (a.dim_ != b.dim_) return false;
    for (int i = 0; i < a.dim_; ++i)
      if (a.coords_[i] != b.coords_[i]) return false;
    return true;
  }

  static void check_dim(int dim) {
    if (dim < kMinDim || dim > kMaxDim)
      throw DimensionMismatchError("dimension must be in [2,5], got " + std::to_string(dim));
  }

 private:
  std::array<double, kMaxDim> coords_{};
  int dim_ = 0;
};

inline double distance(const Point& a, const Point& b) {
  double s = 0.0;
  for (int i = 0; i < a.dim(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

inline double squared_distance(const Point& a, const Point& b) {
  double s = 0.0;
  for (int i = 0; i < a.dim(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

// Interpolation constraint: target value h at a position c, f(c) = h.
struct Constraint {
  Point position;
  double value = 0.0;
};

struct Box {
  Point lo;
  Point hi;

  int dim() const { return lo.dim(); }

  double extent(int axis) const { return hi[axis] - lo[axis]; }

  double max_extent() const {
    double m = 0.0;
    for (int i = 0; i < dim(); ++i) m = std::max(m, extent(i));
    return m;
  }

  double diagonal() const {
    double s = 0.0;
    for (int i = 0; i < dim(); ++i) s += extent(i) * extent(i);
    return std::sqrt(s);
  }

  Box padded(double amount) const {
    Box b = *this;
    for (int i = 0; i < dim(); ++i) {
      b.lo[i] -= amount;
      b.hi[i] += amount;
    }
    return b;
  }
};

// Tight bounding box of a point set; throws on an empty set.
Box bounding_box(const std::vector<Point>& points);
Box bounding_box(const std::vector<Constraint>& constraints);

}  // namespace vshape
