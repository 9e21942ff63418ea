// Iso-contour extraction from a 2D sampled grid.
#pragma once

#include "vshape/geometry.hpp"
#include "vshape/grid.hpp"

namespace vshape {

// Cell-edge crossings by linear interpolation, chained into loops.
// Loops that end on the grid border are left open (closed = false).
// Ambiguous saddle cells are split by the sample at the cell center:
// the field itself when given, otherwise the corner average (the value
// of the bilinear interpolant at the center).
Polyline2D marching_squares(const SampledGrid& grid, double iso, const Field2& field = {});

}  // namespace vshape
