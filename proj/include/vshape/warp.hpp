// Half-way displacement warps built by variational interpolation,
// application to constraint sets before morphing, and the per-frame
// unwarping of extracted contours.
#pragma once

#include <vector>

#include "vshape/constraints.hpp"
#include "vshape/geometry.hpp"
#include "vshape/model.hpp"
#include "vshape/morph.hpp"

namespace vshape {

struct CorrespondenceSet {
  std::vector<Point> a_points;
  std::vector<Point> b_points;

  int dim() const { return a_points.empty() ? 0 : a_points.front().dim(); }
  void validate() const;
};

// One interpolant per coordinate; w(p) is the displacement at p.
struct DisplacementWarp {
  int dim = 0;
  std::vector<RbfModel> components;

  Point displacement(const Point& p) const;
  Point apply(const Point& p) const;  // p + displacement(p)
};

// w_A interpolates (b_i - a_i)/2 at a_i; w_B interpolates (a_i - b_i)/2
// at b_i.  Each coordinate component is an independent solve.
std::pair<DisplacementWarp, DisplacementWarp> build_halfway_warps(const CorrespondenceSet& corr,
                                                                  Kernel kernel,
                                                                  const SolveOptions& options = {});

std::vector<Point> apply_warp(const DisplacementWarp& w, const std::vector<Point>& pts);

// Warps boundary constraints and re-derives each paired normal constraint
// from the warped pair, preserving the original pairing distance.
ConstraintSet warp_constraint_set(const DisplacementWarp& w, const ConstraintSet& set);

// Piecewise unwarp u of a lifted point (spatial..., t).  With tau =
// 2 t / t_max: tau <= 1 adds (1 - tau) w_A at the spatial part, tau > 1
// adds (tau - 1) w_B.  The returned point keeps the t coordinate.
Point unwarp(const Point& lifted, const DisplacementWarp& w_a, const DisplacementWarp& w_b,
             double t_max);

// Full pipeline: warp both sets half-way, morph, extract frames, then map
// every contour vertex through the unwarp at that frame's t.
std::vector<Polyline2D> warped_morph(const ConstraintSet& a, const ConstraintSet& b,
                                     const CorrespondenceSet& corr, double t_max, Kernel kernel,
                                     int n_frames, const FrameGrid& grid,
                                     const SolveOptions& options = {});

}  // namespace vshape
