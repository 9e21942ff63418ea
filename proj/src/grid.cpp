#include "vshape/grid.hpp"

#include <cmath>
#include <string>

namespace vshape {

namespace {

void check_res(int r, int axis) {
  if (r < 2)
    throw Error("sample_grid: resolution per axis must be >= 2, axis " + std::to_string(axis) +
                " has " + std::to_string(r));
}

template <bool Parallel>
SampledGrid sample2(const Field2& f, const Box& bounds, std::array<int, 2> res) {
  check_res(res[0], 0);
  check_res(res[1], 1);
  SampledGrid g;
  g.dim = 2;
  g.bounds = bounds;
  g.res = {res[0], res[1], 1};
  g.values.assign(static_cast<std::size_t>(res[0]) * res[1], 0.0);
#pragma omp parallel for schedule(static) if (Parallel)
  for (int j = 0; j < res[1]; ++j) {
    const double y = g.coord(1, j);
    for (int i = 0; i < res[0]; ++i) {
      g.values[static_cast<std::size_t>(j) * res[0] + i] = f(g.coord(0, i), y);
    }
  }
  for (int j = 0; j < res[1]; ++j)
    for (int i = 0; i < res[0]; ++i)
      if (!std::isfinite(g.at(i, j)))
        throw Error("sample_grid: non-finite value at lattice index (" + std::to_string(i) + "," +
                    std::to_string(j) + ")");
  return g;
}

template <bool Parallel>
SampledGrid sample3(const Field3& f, const Box& bounds, std::array<int, 3> res) {
  for (int a = 0; a < 3; ++a) check_res(res[a], a);
  SampledGrid g;
  g.dim = 3;
  g.bounds = bounds;
  g.res = res;
  g.values.assign(static_cast<std::size_t>(res[0]) * res[1] * res[2], 0.0);
#pragma omp parallel for schedule(static) if (Parallel)
  for (int k = 0; k < res[2]; ++k) {
    const double z = g.coord(2, k);
    for (int j = 0; j < res[1]; ++j) {
      const double y = g.coord(1, j);
      for (int i = 0; i < res[0]; ++i) {
        g.values[(static_cast<std::size_t>(k) * res[1] + j) * res[0] + i] =
            f(g.coord(0, i), y, z);
      }
    }
  }
  for (int k = 0; k < res[2]; ++k)
    for (int j = 0; j < res[1]; ++j)
      for (int i = 0; i < res[0]; ++i)
        if (!std::isfinite(g.at(i, j, k)))
          throw Error("sample_grid: non-finite value at lattice index (" + std::to_string(i) +
                      "," + std::to_string(j) + "," + std::to_string(k) + ")");
  return g;
}

}  // namespace

SampledGrid sample_grid(const Field2& f, const Box& bounds, std::array<int, 2> res) {
  return sample2<true>(f, bounds, res);
}
SampledGrid sample_grid(const Field3& f, const Box& bounds, std::array<int, 3> res) {
  return sample3<true>(f, bounds, res);
}
SampledGrid sample_grid_serial(const Field2& f, const Box& bounds, std::array<int, 2> res) {
  return sample2<false>(f, bounds, res);
}
SampledGrid sample_grid_serial(const Field3& f, const Box& bounds, std::array<int, 3> res) {
  return sample3<false>(f, bounds, res);
}

}  // namespace vshape
