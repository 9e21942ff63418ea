// Independent cross-check oracle: textbook Gaussian elimination with
// partial pivoting on the raw (unnormalized) interpolation system.  Kept
// deliberately separate from the library's assembly and factorization
// paths; everything here is written from the system definition alone.
#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "vshape/types.hpp"

namespace vshape::testing {

inline std::vector<double> gauss_solve(std::vector<double> a, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a[r * n + col]) > std::abs(a[pivot * n + col])) pivot = r;
    if (a[pivot * n + col] == 0.0) throw std::runtime_error("oracle: singular matrix");
    if (pivot != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(a[col * n + c], a[pivot * n + c]);
      std::swap(b[col], b[pivot]);
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      const double factor = a[r * n + col] / a[col * n + col];
      if (factor == 0.0) continue;
      for (std::size_t c = col; c < n; ++c) a[r * n + c] -= factor * a[col * n + c];
      b[r] -= factor * b[col];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double acc = b[i];
    for (std::size_t c = i + 1; c < n; ++c) acc -= a[i * n + c] * x[c];
    x[i] = acc / a[i * n + i];
  }
  return x;
}

enum class OracleKernel { r2_log_r, r, r3 };

inline double oracle_phi(double r, OracleKernel k) {
  switch (k) {
    case OracleKernel::r2_log_r:
      return r > 0.0 ? r * r * std::log(r) : 0.0;
    case OracleKernel::r:
      return r;
    case OracleKernel::r3:
      return r * r * r;
  }
  return 0.0;
}

struct OracleSolution {
  std::vector<double> weights;
  std::vector<double> poly;  // p_0, then per-axis coefficients
};

// Solves the raw system: phi block, border of ones and coordinates, zero
// lower-right block, rhs (h, 0...).
inline OracleSolution solve_interpolation(const std::vector<Constraint>& constraints,
                                          OracleKernel kernel) {
  const std::size_t k = constraints.size();
  const int dim = constraints.front().position.dim();
  const std::size_t n = k + dim + 1;
  std::vector<double> a(n * n, 0.0);
  std::vector<double> b(n, 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      double ss = 0.0;
      for (int ax = 0; ax < dim; ++ax) {
        const double d = constraints[i].position[ax] - constraints[j].position[ax];
        ss += d * d;
      }
      a[i * n + j] = oracle_phi(std::sqrt(ss), kernel);
    }
    a[i * n + k] = 1.0;
    a[k * n + i] = 1.0;
    for (int ax = 0; ax < dim; ++ax) {
      a[i * n + (k + 1 + ax)] = constraints[i].position[ax];
      a[(k + 1 + ax) * n + i] = constraints[i].position[ax];
    }
    b[i] = constraints[i].value;
  }
  const std::vector<double> x = gauss_solve(std::move(a), std::move(b));
  OracleSolution sol;
  sol.weights.assign(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(k));
  sol.poly.assign(x.begin() + static_cast<std::ptrdiff_t>(k), x.end());
  return sol;
}

}  // namespace vshape::testing
