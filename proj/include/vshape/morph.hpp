// Shape transformation by dimension lifting: both shapes' constraints are
// embedded in d+1 dimensions (d+2 with an influence shape), one interpolant
// is solved, and intermediate shapes are slices of it.
#pragma once

#include <functional>
#include <vector>

#include "vshape/constraints.hpp"
#include "vshape/geometry.hpp"
#include "vshape/grid.hpp"
#include "vshape/model.hpp"

namespace vshape {

struct MorphModel {
  RbfModel model;       // dimension source_dim + 1
  double t_max = 1.0;
  int source_dim = 0;
};

// Adds a new trailing coordinate: t = 0 for every constraint of A,
// t = t_max for every constraint of B.  Values are unchanged.
ConstraintSet embed_pair(const ConstraintSet& a, const ConstraintSet& b, double t_max);

MorphModel build_morph(const ConstraintSet& a, const ConstraintSet& b, double t_max,
                       Kernel kernel, const SolveOptions& options = {},
                       SolveStats* stats = nullptr);

inline MorphModel build_morph(const ConstraintSet& a, const ConstraintSet& b, double t_max,
                              const SolveOptions& options = {}, SolveStats* stats = nullptr) {
  return build_morph(a, b, t_max, default_kernel(a.dim + 1), options, stats);
}

// Restriction f(., t) of the lifted interpolant; evaluable anywhere.
Field2 slice2(const MorphModel& morph, double t);
Field3 slice3(const MorphModel& morph, double t);

struct FrameGrid {
  Box bounds;           // source-space extraction window
  int res = 129;        // lattice points per axis
};

// Extraction window derived from both shapes' constraints, padded.
FrameGrid default_frame_grid(const ConstraintSet& a, const ConstraintSet& b, int res = 129,
                             double pad_fraction = 0.15);

// Frames at t = i * t_max / (n_frames - 1), extracted with marching
// squares on the given grid.  2D morphs only.
std::vector<Polyline2D> morph_sequence(const MorphModel& morph, int n_frames,
                                       const FrameGrid& grid);

// Per-pixel (1-alpha) A + alpha B; the zero contour is the baseline
// intermediate shape.
SdfGrid sdf_morph_baseline(const SdfGrid& a, const SdfGrid& b, double alpha);

// Placement of three shapes in the two added dimensions (s, t).
struct InfluencePlacement {
  std::array<double, 2> a{0.0, 0.0};
  std::array<double, 2> b{1.0, 0.0};
  std::array<double, 2> c{0.5, 0.5};
};

// Adds two trailing coordinates per constraint from the owning shape's
// placement.  Throws on collinear placements.
ConstraintSet embed_influence(const ConstraintSet& a, const ConstraintSet& b,
                              const ConstraintSet& c,
                              const InfluencePlacement& placement = {});

// Restriction f(., s, t) of a d+2 dimensional interpolant.
Field2 influence_slice2(const RbfModel& model, double s, double t);
Field3 influence_slice3(const RbfModel& model, double s, double t);

}  // namespace vshape
