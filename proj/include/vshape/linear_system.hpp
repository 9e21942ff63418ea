// Assembly and direct solution of the variational interpolation system.
//
// The system is symmetric indefinite (saddle point): the upper-left k x k
// block holds kernel values phi(|c_i - c_j|), the border holds the degree-1
// polynomial terms, and the lower-right (dim+1) x (dim+1) block is zero.
// Factorization is LDL^T with Bunch-Kaufman partial pivoting; the zero
// block makes 2x2 pivots unavoidable.
#pragma once

#include <cstddef>
#include <vector>

#include "vshape/kernel.hpp"
#include "vshape/types.hpp"

namespace vshape {

struct LinearSystem {
  std::size_t n = 0;
  std::vector<double> a;    // row-major n x n, symmetric
  std::vector<double> rhs;  // (h_1..h_k, 0, ..., 0)

  double at(std::size_t i, std::size_t j) const { return a[i * n + j]; }
  double& at(std::size_t i, std::size_t j) { return a[i * n + j]; }
};

// Throws DuplicateCenterError if two positions coincide exactly or lie
// within 1e-12 of each other.
void detect_duplicate_centers(const std::vector<Point>& positions);

// Builds the (k+dim+1) square system.  Checks dimensions, duplicates and
// the minimum constraint count.  The parallel variant fills rows with
// OpenMP; both produce bit-identical output.
LinearSystem assemble_system(const std::vector<Constraint>& constraints, Kernel kind);
LinearSystem assemble_system_serial(const std::vector<Constraint>& constraints, Kernel kind);

struct LdltFactor {
  std::size_t n = 0;
  std::vector<double> a;   // L below the diagonal, D on the (sub)diagonal
  std::vector<int> ipiv;   // LAPACK-style interchange record
  double min_pivot = 0.0;  // smallest pivot magnitude accepted
};

// Factors a symmetric matrix in place (full row-major storage, lower
// triangle referenced).  Pivots with magnitude below
// rel_pivot_tol * max|a_ij| raise SingularSystemError naming the step.
LdltFactor ldlt_factorize(std::vector<double> a, std::size_t n, bool parallel = true,
                          double rel_pivot_tol = 1e-12);

// Solves A x = b given the factorization; b is overwritten with x.
void ldlt_solve(const LdltFactor& f, std::vector<double>& b);

}  // namespace vshape
