// Reconstruction of one 3D implicit surface from many 2D contour slices,
// parallel or arbitrarily oriented, solved as a single interpolation
// problem.
#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "vshape/constraints.hpp"
#include "vshape/geometry.hpp"
#include "vshape/model.hpp"

namespace vshape {

// Rigid frame mapping slice coordinates (u, v) into R^3:
// p = origin + u * axis_u + v * axis_v.
struct SliceFrame {
  Point origin{0.0, 0.0, 0.0};
  std::array<double, 3> axis_u{1.0, 0.0, 0.0};
  std::array<double, 3> axis_v{0.0, 1.0, 0.0};

  void validate() const;  // axes orthonormal within 1e-9
  Point map(double u, double v) const;
};

struct OrientedSlice {
  ConstraintSet constraints;  // dim 2
  SliceFrame frame;
};

// Parallel stacking: slice i's constraints gain z equal to the cumulative
// spacing position (z_0 = 0).  spacings has one entry per gap, all > 0.
ConstraintSet stack_parallel(const std::vector<ConstraintSet>& slices,
                             const std::vector<double>& spacings);

// Maps each slice's 2D constraints through its frame into 3D.  Exact
// coordinate collisions between slices are an error; near-duplicates
// (distance < 1e-6) are merged keeping the first, with a count reported.
struct PlacementReport {
  std::size_t merged = 0;
};
ConstraintSet place_oriented(const std::vector<OrientedSlice>& slices,
                             PlacementReport* report = nullptr);

struct ReconstructResult {
  RbfModel model;
  TriMesh mesh;
  Box extraction_bounds;
};

// Solves the combined 3D constraints and extracts the zero isosurface by
// marching cubes.  The extraction volume is the constraint bounding box
// padded by max(2 * max_spacing, 20% of its diagonal) so the rounded caps
// beyond the extreme slices are contained.
ReconstructResult reconstruct(const ConstraintSet& constraints, Kernel kernel, int resolution,
                              double max_spacing = 0.0, const SolveOptions& options = {},
                              SolveStats* stats = nullptr);

inline ReconstructResult reconstruct(const ConstraintSet& constraints, int resolution,
                                     double max_spacing = 0.0, const SolveOptions& options = {},
                                     SolveStats* stats = nullptr) {
  return reconstruct(constraints, default_kernel(3), resolution, max_spacing, options, stats);
}

}  // namespace vshape
