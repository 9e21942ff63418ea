// Solved variational interpolant f(x) = sum_j d_j phi(|x - c_j|) + P(x)
// with P a degree-1 polynomial.
#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "vshape/kernel.hpp"
#include "vshape/types.hpp"

namespace vshape {

struct RbfModel {
  int dim = 0;
  Kernel kernel = Kernel::thin_plate;
  std::vector<Point> centers;
  std::vector<double> weights;
  std::array<double, kMaxDim + 1> poly{};  // p_0, then one coefficient per axis

  double evaluate(const Point& x) const;
  double operator()(const Point& x) const { return evaluate(x); }

  // Analytic gradient of the interpolant.  Kernel contributions at a
  // coincident center are taken as their (zero) limit.
  Point gradient(const Point& x) const;
};

struct SolveOptions {
  bool normalize = true;   // rescale constraints to a unit box centered at the origin
  bool parallel = true;    // OpenMP in assembly, factorization and refinement
  int refine_steps = 1;    // iterative refinement passes after the direct solve
  double rel_pivot_tol = 1e-12;
};

struct SolveStats {
  std::size_t constraint_count = 0;
  std::size_t system_size = 0;
  double min_pivot = 0.0;            // conditioning diagnostic
  double max_residual = 0.0;         // max_i |f(c_i) - h_i| of the returned model
  double side_condition_error = 0.0; // max over |sum d_j| and |sum d_j c_j^alpha|
  double scale = 1.0;                // normalization applied before the solve
};

RbfModel solve_model(const std::vector<Constraint>& constraints, Kernel kind,
                     const SolveOptions& options = {}, SolveStats* stats = nullptr);

inline RbfModel solve_model(const std::vector<Constraint>& constraints,
                            const SolveOptions& options = {}, SolveStats* stats = nullptr) {
  if (constraints.empty()) throw InsufficientConstraintsError("no constraints given");
  return solve_model(constraints, default_kernel(constraints.front().position.dim()), options,
                     stats);
}

}  // namespace vshape
