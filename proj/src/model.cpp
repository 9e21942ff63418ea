#include "vshape/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "vshape/linear_system.hpp"

namespace vshape {

double RbfModel::evaluate(const Point& x) const {
  if (x.dim() != dim)
    throw DimensionMismatchError("evaluate: point dimension " + std::to_string(x.dim()) +
                                 " does not match model dimension " + std::to_string(dim));
  double acc = poly[0];
  for (int a = 0; a < dim; ++a) acc += poly[a + 1] * x[a];
  for (std::size_t j = 0; j < centers.size(); ++j)
    acc += weights[j] * kernel_eval(distance(x, centers[j]), kernel);
  return acc;
}

Point RbfModel::gradient(const Point& x) const {
  if (x.dim() != dim)
    throw DimensionMismatchError("gradient: point dimension " + std::to_string(x.dim()) +
                                 " does not match model dimension " + std::to_string(dim));
  Point g = Point::zero(dim);
  for (int a = 0; a < dim; ++a) g[a] = poly[a + 1];
  for (std::size_t j = 0; j < centers.size(); ++j) {
    const double r = distance(x, centers[j]);
    const double s = weights[j] * kernel_deriv_over_r(r, kernel);
    if (r == 0.0) continue;
    for (int a = 0; a < dim; ++a) g[a] += s * (x[a] - centers[j][a]);
  }
  return g;
}

Box bounding_box(const std::vector<Point>& points) {
  if (points.empty()) throw Error("bounding_box: empty point set");
  Box b{points.front(), points.front()};
  for (const Point& p : points) {
    for (int a = 0; a < p.dim(); ++a) {
      b.lo[a] = std::min(b.lo[a], p[a]);
      b.hi[a] = std::max(b.hi[a], p[a]);
    }
  }
  return b;
}

Box bounding_box(const std::vector<Constraint>& constraints) {
  if (constraints.empty()) throw Error("bounding_box: empty constraint set");
  Box b{constraints.front().position, constraints.front().position};
  for (const Constraint& c : constraints) {
    for (int a = 0; a < c.position.dim(); ++a) {
      b.lo[a] = std::min(b.lo[a], c.position[a]);
      b.hi[a] = std::max(b.hi[a], c.position[a]);
    }
  }
  return b;
}

namespace {

// Matrix-vector product of the saddle system computed directly from the
// constraints, used for residuals in iterative refinement without keeping
// a second copy of the assembled matrix.
void system_matvec(const std::vector<Point>& pos, Kernel kind, const std::vector<double>& x,
                   std::vector<double>& out, bool parallel) {
  const std::size_t k = pos.size();
  const int dim = pos.front().dim();
  const std::size_t n = k + dim + 1;
  out.assign(n, 0.0);
  const auto ik = static_cast<std::ptrdiff_t>(k);
#pragma omp parallel for schedule(static) if (parallel && k > 64)
  for (std::ptrdiff_t ii = 0; ii < ik; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    double acc = x[k];
    for (int a = 0; a < dim; ++a) acc += x[k + 1 + a] * pos[i][a];
    for (std::size_t j = 0; j < k; ++j)
      acc += kernel_eval(distance(pos[i], pos[j]), kind) * x[j];
    out[i] = acc;
  }
  double sum_d = 0.0;
  for (std::size_t j = 0; j < k; ++j) sum_d += x[j];
  out[k] = sum_d;
  for (int a = 0; a < dim; ++a) {
    double s = 0.0;
    for (std::size_t j = 0; j < k; ++j) s += x[j] * pos[j][a];
    out[k + 1 + a] = s;
  }
}

}  // namespace

RbfModel solve_model(const std::vector<Constraint>& constraints, Kernel kind,
                     const SolveOptions& options, SolveStats* stats) {
  if (constraints.empty()) throw InsufficientConstraintsError("no constraints given");
  const int dim = constraints.front().position.dim();
  Point::check_dim(dim);
  const std::size_t k = constraints.size();

  // Rescale into a unit box centered at the origin; r^2 log r changes sign
  // at r = 1 and conditioning degrades off unit scale.
  Point center = Point::zero(dim);
  double scale = 1.0;
  std::vector<Constraint> work = constraints;
  if (options.normalize) {
    const Box box = bounding_box(constraints);
    for (int a = 0; a < dim; ++a) center[a] = 0.5 * (box.lo[a] + box.hi[a]);
    const double extent = box.max_extent();
    if (extent > 0.0) scale = 1.0 / extent;
    for (Constraint& c : work)
      for (int a = 0; a < dim; ++a) c.position[a] = (c.position[a] - center[a]) * scale;
  }

  LinearSystem sys = options.parallel ? assemble_system(work, kind)
                                      : assemble_system_serial(work, kind);
  const std::size_t n = sys.n;

  // Axes on which every constraint shares one coordinate (common for
  // dimension-lifted sets sitting in a coordinate hyperplane) leave an
  // all-zero side-condition row.  Pin that polynomial coefficient to zero
  // by turning the row into the equation p_axis = 0; after normalization
  // the shared coordinate is exactly 0, so nothing else changes.
  for (int a = 0; a < dim; ++a) {
    bool constant = true;
    for (const Constraint& c : work)
      if (c.position[a] != work.front().position[a]) {
        constant = false;
        break;
      }
    if (constant) {
      if (work.front().position[a] != 0.0)
        throw SingularSystemError(
            "constraints lie in a coordinate hyperplane off the origin; "
            "enable normalization to solve such sets",
            k + 1 + a, 0.0);
      sys.at(k + 1 + a, k + 1 + a) = 1.0;
    }
  }

  LdltFactor factor = ldlt_factorize(sys.a, n, options.parallel, options.rel_pivot_tol);

  std::vector<double> solution = sys.rhs;
  ldlt_solve(factor, solution);

  std::vector<Point> positions(k);
  for (std::size_t i = 0; i < k; ++i) positions[i] = work[i].position;

  std::vector<double> ax, correction;
  for (int pass = 0; pass < options.refine_steps; ++pass) {
    system_matvec(positions, kind, solution, ax, options.parallel);
    correction.resize(n);
    for (std::size_t i = 0; i < n; ++i) correction[i] = sys.rhs[i] - ax[i];
    ldlt_solve(factor, correction);
    for (std::size_t i = 0; i < n; ++i) solution[i] += correction[i];
  }

  // Map the solution back to the original coordinates.  Weights pick up the
  // kernel's scale power; the thin-plate log term collapses to a constant
  // under the side conditions sum d = 0, sum d c^alpha = 0.
  RbfModel model;
  model.dim = dim;
  model.kernel = kind;
  model.centers.resize(k);
  model.weights.resize(k);
  for (std::size_t j = 0; j < k; ++j) model.centers[j] = constraints[j].position;

  const double wscale = std::pow(scale, kernel_scale_power(kind));
  for (std::size_t j = 0; j < k; ++j) model.weights[j] = solution[j] * wscale;

  model.poly.fill(0.0);
  double p0 = solution[k];
  for (int a = 0; a < dim; ++a) {
    model.poly[a + 1] = solution[k + 1 + a] * scale;
    p0 -= solution[k + 1 + a] * scale * center[a];
  }
  if (kind == Kernel::thin_plate && scale != 1.0) {
    double sum_d_c2 = 0.0;
    for (std::size_t j = 0; j < k; ++j)
      sum_d_c2 += solution[j] * squared_distance(model.centers[j], Point::zero(dim));
    p0 += scale * scale * std::log(scale) * sum_d_c2;
  }
  model.poly[0] = p0;

  if (stats) {
    stats->constraint_count = k;
    stats->system_size = n;
    stats->min_pivot = factor.min_pivot;
    stats->scale = scale;
    double max_res = 0.0;
    for (std::size_t i = 0; i < k; ++i)
      max_res = std::max(max_res,
                         std::abs(model.evaluate(constraints[i].position) - constraints[i].value));
    stats->max_residual = max_res;
    double side = std::abs(std::accumulate(model.weights.begin(), model.weights.end(), 0.0));
    for (int a = 0; a < dim; ++a) {
      double s = 0.0;
      for (std::size_t j = 0; j < k; ++j) s += model.weights[j] * model.centers[j][a];
      side = std::max(side, std::abs(s));
    }
    stats->side_condition_error = side;
  }
  return model;
}

}  // namespace vshape
