// Aggregate squared-curvature energy of a 2D interpolant,
// integral of f_xx^2 + 2 f_xy^2 + f_yy^2 over a box.
#pragma once

#include "vshape/model.hpp"
#include "vshape/types.hpp"

namespace vshape {

// Midpoint-rule quadrature on a grid_res x grid_res cell subdivision of
// bounds.  Second derivatives come from central finite differences on the
// analytic evaluation.  Only defined for dim == 2.
double thin_plate_energy(const RbfModel& model, const Box& bounds, int grid_res);

}  // namespace vshape
