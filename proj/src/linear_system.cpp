#include "vshape/linear_system.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <limits>
#include <string>
#include <unordered_map>

namespace vshape {

namespace {

// Bit-pattern key so exact coordinate duplicates hash identically.
struct CoordKey {
  std::array<std::uint64_t, kMaxDim> bits{};
  int dim = 0;
  bool operator==(const CoordKey& o) const { return dim == o.dim && bits == o.bits; }
};

struct CoordKeyHash {
  std::size_t operator()(const CoordKey& k) const {
    std::size_t h = static_cast<std::size_t>(k.dim);
    for (int i = 0; i < k.dim; ++i) h = h * 1000003u ^ static_cast<std::size_t>(k.bits[i]);
    return h;
  }
};

CoordKey make_key(const Point& p) {
  CoordKey k;
  k.dim = p.dim();
  for (int i = 0; i < p.dim(); ++i) {
    double c = p[i] == 0.0 ? 0.0 : p[i];  // collapse -0.0 and +0.0
    std::uint64_t b;
    std::memcpy(&b, &c, sizeof b);
    k.bits[i] = b;
  }
  return k;
}

void check_constraints(const std::vector<Constraint>& constraints) {
  if (constraints.empty()) throw InsufficientConstraintsError("no constraints given");
  const int dim = constraints.front().position.dim();
  Point::check_dim(dim);
  for (std::size_t i = 0; i < constraints.size(); ++i) {
    const Constraint& c = constraints[i];
    if (c.position.dim() != dim)
      throw DimensionMismatchError("constraint " + std::to_string(i) + " has dimension " +
                                   std::to_string(c.position.dim()) + ", expected " +
                                   std::to_string(dim));
    if (!c.position.finite() || !std::isfinite(c.value))
      throw Error("constraint " + std::to_string(i) + " is not finite");
  }
}

}  // namespace

void detect_duplicate_centers(const std::vector<Point>& positions) {
  std::unordered_map<CoordKey, std::size_t, CoordKeyHash> seen;
  seen.reserve(positions.size());
  for (std::size_t i = 0; i < positions.size(); ++i) {
    auto [it, inserted] = seen.emplace(make_key(positions[i]), i);
    if (!inserted)
      throw DuplicateCenterError("duplicate constraint positions at indices " +
                                     std::to_string(it->second) + " and " + std::to_string(i),
                                 it->second, i);
  }
  // Near-coincident pairs would make the system numerically singular.
  for (std::size_t i = 0; i < positions.size(); ++i) {
    for (std::size_t j = i + 1; j < positions.size(); ++j) {
      if (distance(positions[i], positions[j]) < 1e-12)
        throw DuplicateCenterError("constraint positions at indices " + std::to_string(i) +
                                       " and " + std::to_string(j) + " are within 1e-12",
                                   i, j);
    }
  }
}

namespace {

template <bool Parallel>
LinearSystem assemble_impl(const std::vector<Constraint>& constraints, Kernel kind) {
  check_constraints(constraints);
  const std::size_t k = constraints.size();
  if (k > kMaxConstraints)
    throw Error("constraint count " + std::to_string(k) + " exceeds the dense solver cap of " +
                std::to_string(kMaxConstraints));

  std::vector<Point> positions(k);
  for (std::size_t i = 0; i < k; ++i) positions[i] = constraints[i].position;
  detect_duplicate_centers(positions);

  const int dim = positions.front().dim();
  if (k < static_cast<std::size_t>(dim) + 1)
    throw InsufficientConstraintsError("need at least dim+1 = " + std::to_string(dim + 1) +
                                       " constraints, got " + std::to_string(k));

  const std::size_t n = k + dim + 1;
  LinearSystem sys;
  sys.n = n;
  sys.a.assign(n * n, 0.0);
  sys.rhs.assign(n, 0.0);

  const auto ik = static_cast<std::ptrdiff_t>(k);
#pragma omp parallel for schedule(static) if (Parallel)
  for (std::ptrdiff_t i = 0; i < ik; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    for (std::size_t j = 0; j <= ui; ++j) {
      const double v = kernel_eval(distance(positions[ui], positions[j]), kind);
      sys.at(ui, j) = v;
      sys.at(j, ui) = v;
    }
    sys.at(ui, k) = 1.0;
    sys.at(k, ui) = 1.0;
    for (int a = 0; a < dim; ++a) {
      sys.at(ui, k + 1 + a) = positions[ui][a];
      sys.at(k + 1 + a, ui) = positions[ui][a];
    }
  }
  for (std::size_t i = 0; i < k; ++i) sys.rhs[i] = constraints[i].value;
  return sys;
}

// Interchanges rows and columns kk < kp within the trailing submatrix of
// the factorization step, lower triangle storage.  Previously computed L
// columns are deliberately left in place; the solve phase applies the
// recorded interchanges to the right-hand side at the matching points.
void trailing_swap(std::vector<double>& a, std::size_t n, std::size_t kk, std::size_t kp) {
  auto at = [&](std::size_t r, std::size_t c) -> double& { return a[r * n + c]; };
  for (std::size_t i = kp + 1; i < n; ++i) std::swap(at(i, kk), at(i, kp));
  for (std::size_t i = kk + 1; i < kp; ++i) std::swap(at(i, kk), at(kp, i));
  std::swap(at(kk, kk), at(kp, kp));
}

double min_abs_eigenvalue_2x2(double a, double b, double c) {
  // Symmetric [[a, b], [b, c]].
  const double tr = a + c;
  const double disc = std::sqrt((a - c) * (a - c) + 4.0 * b * b);
  const double e0 = 0.5 * (tr + disc);
  const double e1 = 0.5 * (tr - disc);
  return std::min(std::abs(e0), std::abs(e1));
}

}  // namespace

LinearSystem assemble_system(const std::vector<Constraint>& constraints, Kernel kind) {
  return assemble_impl<true>(constraints, kind);
}

LinearSystem assemble_system_serial(const std::vector<Constraint>& constraints, Kernel kind) {
  return assemble_impl<false>(constraints, kind);
}

LdltFactor ldlt_factorize(std::vector<double> a, std::size_t n, bool parallel,
                          double rel_pivot_tol) {
  LdltFactor f;
  f.n = n;
  f.ipiv.assign(n, 0);
  f.min_pivot = std::numeric_limits<double>::infinity();

  double max_entry = 0.0;
  for (double v : a) max_entry = std::max(max_entry, std::abs(v));
  const double pivot_floor = rel_pivot_tol * max_entry;

  auto at = [&](std::size_t r, std::size_t c) -> double& { return a[r * n + c]; };
  const double alpha = (1.0 + std::sqrt(17.0)) / 8.0;

  auto accept_pivot = [&](double magnitude, std::size_t step) {
    if (!(magnitude > pivot_floor) || !std::isfinite(magnitude))
      throw SingularSystemError("singular system: pivot " + std::to_string(step) +
                                    " has magnitude " + std::to_string(magnitude) +
                                    " below threshold",
                                step, magnitude);
    f.min_pivot = std::min(f.min_pivot, magnitude);
  };

  std::vector<double> lcol1(n), lcol2(n);

  std::size_t k = 0;
  while (k < n) {
    const double absakk = std::abs(at(k, k));

    // Largest below-diagonal entry of column k.
    std::size_t r = k;
    double colmax = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) {
      const double v = std::abs(at(i, k));
      if (v > colmax) {
        colmax = v;
        r = i;
      }
    }

    int kstep = 1;
    std::size_t p = k;
    if (std::max(absakk, colmax) == 0.0) {
      accept_pivot(0.0, k);  // always throws
    }
    if (absakk >= alpha * colmax) {
      kstep = 1;
      p = k;
    } else {
      // Largest off-diagonal entry of row/column r.
      double rowmax = 0.0;
      for (std::size_t j = k; j < r; ++j) rowmax = std::max(rowmax, std::abs(at(r, j)));
      for (std::size_t i = r + 1; i < n; ++i) rowmax = std::max(rowmax, std::abs(at(i, r)));
      if (absakk * rowmax >= alpha * colmax * colmax) {
        kstep = 1;
        p = k;
      } else if (std::abs(at(r, r)) >= alpha * rowmax) {
        kstep = 1;
        p = r;
      } else {
        kstep = 2;
        p = r;
      }
    }

    if (kstep == 1 && p != k) trailing_swap(a, n, k, p);
    if (kstep == 2 && p != k + 1) {
      trailing_swap(a, n, k + 1, p);
      std::swap(at(k + 1, k), at(p, k));
    }

    if (kstep == 1) {
      const double d = at(k, k);
      accept_pivot(std::abs(d), k);
      const double inv_d = 1.0 / d;
      for (std::size_t i = k + 1; i < n; ++i) lcol1[i] = at(i, k) * inv_d;
      const auto start = static_cast<std::ptrdiff_t>(k + 1);
      const auto stop = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static) if (parallel && stop - start > 64)
      for (std::ptrdiff_t ii = start; ii < stop; ++ii) {
        const auto i = static_cast<std::size_t>(ii);
        const double li = lcol1[i];
        double* row = &a[i * n];
        for (std::size_t j = k + 1; j <= i; ++j) row[j] -= li * at(j, k);
      }
      for (std::size_t i = k + 1; i < n; ++i) at(i, k) = lcol1[i];
      f.ipiv[k] = static_cast<int>(p);
      k += 1;
    } else {
      const double d11 = at(k, k);
      const double d21 = at(k + 1, k);
      const double d22 = at(k + 1, k + 1);
      accept_pivot(min_abs_eigenvalue_2x2(d11, d21, d22), k);
      const double det = d11 * d22 - d21 * d21;
      const double inv_det = 1.0 / det;
      for (std::size_t i = k + 2; i < n; ++i) {
        const double w1 = at(i, k);
        const double w2 = at(i, k + 1);
        lcol1[i] = (w1 * d22 - w2 * d21) * inv_det;
        lcol2[i] = (w2 * d11 - w1 * d21) * inv_det;
      }
      const auto start = static_cast<std::ptrdiff_t>(k + 2);
      const auto stop = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static) if (parallel && stop - start > 64)
      for (std::ptrdiff_t ii = start; ii < stop; ++ii) {
        const auto i = static_cast<std::size_t>(ii);
        const double l1 = lcol1[i];
        const double l2 = lcol2[i];
        double* row = &a[i * n];
        for (std::size_t j = k + 2; j <= i; ++j) row[j] -= l1 * at(j, k) + l2 * at(j, k + 1);
      }
      for (std::size_t i = k + 2; i < n; ++i) {
        at(i, k) = lcol1[i];
        at(i, k + 1) = lcol2[i];
      }
      f.ipiv[k] = -static_cast<int>(p) - 1;
      f.ipiv[k + 1] = f.ipiv[k];
      k += 2;
    }
  }

  f.a = std::move(a);
  return f;
}

void ldlt_solve(const LdltFactor& f, std::vector<double>& b) {
  const std::size_t n = f.n;
  if (b.size() != n) throw Error("ldlt_solve: rhs size mismatch");
  const auto at = [&](std::size_t r, std::size_t c) { return f.a[r * n + c]; };

  // Forward: apply interchanges and L^{-1} block by block.
  std::size_t k = 0;
  while (k < n) {
    if (f.ipiv[k] >= 0) {
      const auto p = static_cast<std::size_t>(f.ipiv[k]);
      if (p != k) std::swap(b[k], b[p]);
      const double bk = b[k];
      for (std::size_t i = k + 1; i < n; ++i) b[i] -= at(i, k) * bk;
      k += 1;
    } else {
      const auto p = static_cast<std::size_t>(-f.ipiv[k] - 1);
      if (p != k + 1) std::swap(b[k + 1], b[p]);
      const double bk = b[k];
      const double bk1 = b[k + 1];
      for (std::size_t i = k + 2; i < n; ++i) b[i] -= at(i, k) * bk + at(i, k + 1) * bk1;
      k += 2;
    }
  }

  // Diagonal solve.
  k = 0;
  while (k < n) {
    if (f.ipiv[k] >= 0) {
      b[k] /= at(k, k);
      k += 1;
    } else {
      const double d11 = at(k, k);
      const double d21 = at(k + 1, k);
      const double d22 = at(k + 1, k + 1);
      const double det = d11 * d22 - d21 * d21;
      const double x0 = (d22 * b[k] - d21 * b[k + 1]) / det;
      const double x1 = (d11 * b[k + 1] - d21 * b[k]) / det;
      b[k] = x0;
      b[k + 1] = x1;
      k += 2;
    }
  }

  // Backward: L^{-T} and reverse interchanges.
  std::size_t kk = n;
  while (kk > 0) {
    if (f.ipiv[kk - 1] >= 0) {
      const std::size_t kcur = kk - 1;
      double acc = b[kcur];
      for (std::size_t i = kcur + 1; i < n; ++i) acc -= at(i, kcur) * b[i];
      b[kcur] = acc;
      const auto p = static_cast<std::size_t>(f.ipiv[kcur]);
      if (p != kcur) std::swap(b[kcur], b[p]);
      kk -= 1;
    } else {
      const std::size_t kcur = kk - 2;
      double acc0 = b[kcur];
      double acc1 = b[kcur + 1];
      for (std::size_t i = kcur + 2; i < n; ++i) {
        acc0 -= at(i, kcur) * b[i];
        acc1 -= at(i, kcur + 1) * b[i];
      }
      b[kcur] = acc0;
      b[kcur + 1] = acc1;
      const auto p = static_cast<std::size_t>(-f.ipiv[kcur] - 1);
      if (p != kcur + 1) std::swap(b[kcur + 1], b[p]);
      kk -= 2;
    }
  }
}

}  // namespace vshape
