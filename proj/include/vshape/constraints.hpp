// Boundary/normal constraint generation from 2D grayscale images and from
// 3D points with normals, plus the signed-distance baseline.
#pragma once

#include <cstddef>
#include <vector>

#include "vshape/geometry.hpp"
#include "vshape/types.hpp"

namespace vshape {

// 2D scalar grid, white (255) inside a shape, black (0) outside, gray on
// the boundary.  Pixel centers sit at integer coordinates, row-major.
struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<double> pixels;

  double at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
  double& at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }

  // Bilinear interpolation; valid for coordinates in [0, w-1] x [0, h-1].
  double sample(double x, double y) const;

  void validate() const;
};

struct PointNormalCloud {
  std::vector<Point> points;    // 3D
  std::vector<Point> normals;   // unit length
};

// Paired boundary (value 0) and normal (positive value) constraints.
struct ConstraintSet {
  int dim = 0;
  std::vector<Constraint> boundary;
  std::vector<Constraint> normal;
  // normal_of[i] is the index into `normal` paired with boundary[i], or -1.
  std::vector<int> normal_of;
  std::size_t skipped_flat_gradient = 0;  // crossings dropped for a vanishing gradient

  std::vector<Constraint> all() const;
  std::size_t size() const { return boundary.size() + normal.size(); }
};

struct ImageConstraintOptions {
  double normal_offset = 1.0;  // distance between boundary and normal constraint, in pixels
  double normal_value = 1.0;
  int stride = 1;              // keep every n-th crossing
};

// Scans east and south neighbors of every pixel for crossings of the iso
// level m; each crossing yields a boundary constraint at the sub-pixel
// location given by linear interpolation and a paired normal constraint
// offset along the image gradient toward the brighter (interior) side.
ConstraintSet image_to_constraints(const GrayImage& img, double m,
                                   const ImageConstraintOptions& options = {});

// Central-difference gradient of the bilinearly interpolated image.
// pos must be at least one pixel away from the border.
std::array<double, 2> image_gradient(const GrayImage& img, double x, double y);

// Boundary constraint at each point, normal constraint at p - k n.
ConstraintSet points_normals_to_constraints(const PointNormalCloud& cloud, double k = 0.01,
                                            double normal_value = 1.0);

// Per-pixel signed Euclidean distance to the sub-pixel iso-m boundary,
// positive on the >= m side.
struct SdfGrid {
  int width = 0;
  int height = 0;
  std::vector<double> values;

  double at(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x]; }
  double& at(int x, int y) { return values[static_cast<std::size_t>(y) * width + x]; }
};

SdfGrid signed_distance_field(const GrayImage& img, double m);
SdfGrid signed_distance_field_serial(const GrayImage& img, double m);

// The sub-pixel boundary contours used by the SDF, exposed for tests and
// for contour comparisons against reconstructed shapes.
Polyline2D image_iso_contours(const GrayImage& img, double m);

}  // namespace vshape
