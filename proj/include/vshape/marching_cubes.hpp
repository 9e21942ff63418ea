// Isosurface extraction from a 3D sampled grid.
#pragma once

#include "vshape/geometry.hpp"
#include "vshape/grid.hpp"

namespace vshape {

// Standard 256-case table lookup with vertices placed by linear
// interpolation along lattice edges.  Vertices are shared across cells
// (one per crossing edge), output ordering is a fixed function of the
// lattice traversal, and zero-area triangles are dropped.
TriMesh marching_cubes(const SampledGrid& grid, double iso);

}  // namespace vshape
