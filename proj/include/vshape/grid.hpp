// Lattice sampling of implicit functions for contour/isosurface extraction.
#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <vector>

#include "vshape/types.hpp"

namespace vshape {

using Field2 = std::function<double(double, double)>;
using Field3 = std::function<double(double, double, double)>;

// Scalar samples at res[a] lattice points per axis spanning bounds
// inclusively.  dim is 2 or 3.
struct SampledGrid {
  int dim = 0;
  Box bounds;
  std::array<int, 3> res{};  // lattice points per axis (>= 2 each)
  std::vector<double> values;

  double step(int axis) const { return bounds.extent(axis) / (res[axis] - 1); }
  double coord(int axis, int i) const { return bounds.lo[axis] + step(axis) * i; }

  double at(int i, int j) const { return values[static_cast<std::size_t>(j) * res[0] + i]; }
  double at(int i, int j, int k) const {
    return values[(static_cast<std::size_t>(k) * res[1] + j) * res[0] + i];
  }
};

// Lattice evaluation of f.  Throws on a non-finite sample, naming the
// lattice index.  The parallel variant distributes rows/slabs over OpenMP
// threads; values are bit-identical to the serial reference.
SampledGrid sample_grid(const Field2& f, const Box& bounds, std::array<int, 2> res);
SampledGrid sample_grid(const Field3& f, const Box& bounds, std::array<int, 3> res);
SampledGrid sample_grid_serial(const Field2& f, const Box& bounds, std::array<int, 2> res);
SampledGrid sample_grid_serial(const Field3& f, const Box& bounds, std::array<int, 3> res);

}  // namespace vshape
