#include "vshape/energy.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace vshape {

double thin_plate_energy(const RbfModel& model, const Box& bounds, int grid_res) {
  if (model.dim != 2)
    throw Error("thin_plate_energy: only defined for 2D models, got dim " +
                std::to_string(model.dim));
  if (grid_res < 8) throw Error("thin_plate_energy: grid_res must be >= 8");

  const double wx = bounds.extent(0);
  const double wy = bounds.extent(1);
  const double hx = wx / grid_res;
  const double hy = wy / grid_res;
  const double h = 1e-4 * std::max(wx, wy);
  const double inv_h2 = 1.0 / (h * h);
  const double inv_4h2 = 1.0 / (4.0 * h * h);

  // Row sums are accumulated per row and added serially so the result does
  // not depend on the thread count.
  std::vector<double> row_sums(grid_res, 0.0);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < grid_res; ++i) {
    const double x = bounds.lo[0] + (i + 0.5) * hx;
    double row = 0.0;
    for (int j = 0; j < grid_res; ++j) {
      const double y = bounds.lo[1] + (j + 0.5) * hy;
      const double f0 = model.evaluate({x, y});
      const double fxx =
          (model.evaluate({x + h, y}) - 2.0 * f0 + model.evaluate({x - h, y})) * inv_h2;
      const double fyy =
          (model.evaluate({x, y + h}) - 2.0 * f0 + model.evaluate({x, y - h})) * inv_h2;
      const double fxy = (model.evaluate({x + h, y + h}) - model.evaluate({x + h, y - h}) -
                          model.evaluate({x - h, y + h}) + model.evaluate({x - h, y - h})) *
                         inv_4h2;
      row += fxx * fxx + 2.0 * fxy * fxy + fyy * fyy;
    }
    row_sums[i] = row;
  }
  double total = 0.0;
  for (double r : row_sums) total += r;
  return total * hx * hy;
}

}  // namespace vshape
