// Radial basis kernels for variational interpolation.
#pragma once

#include <string>

#include "vshape/types.hpp"

namespace vshape {

enum class Kernel {
  thin_plate,  // r^2 log r
  linear,      // r
  cubic,       // r^3
};

// Default kernel per problem dimension: r^2 log r for even dimensions
// (the classic thin-plate choice in 2D), r^3 for odd ones.
inline Kernel default_kernel(int dim) {
  Point::check_dim(dim);
  return (dim % 2 == 0) ? Kernel::thin_plate : Kernel::cubic;
}

// phi(r).  The thin-plate form takes its limit value 0 at r = 0.
inline double kernel_eval(double r, Kernel kind) {
  if (r < 0.0) throw Error("kernel_eval: negative radius");
  switch (kind) {
    case Kernel::thin_plate:
      return r == 0.0 ? 0.0 : r * r * std::log(r);
    case Kernel::linear:
      return r;
    case Kernel::cubic:
      return r * r * r;
  }
  return 0.0;
}

// phi'(r) / r, the scalar factor of the gradient contribution
// grad phi(|x-c|) = (phi'(r)/r) (x - c).  Returns 0 at r = 0 where the
// full contribution has a zero limit (thin-plate, cubic) or is taken as
// zero by convention (linear, whose derivative is singular there).
inline double kernel_deriv_over_r(double r, Kernel kind) {
  if (r == 0.0) return 0.0;
  switch (kind) {
    case Kernel::thin_plate:
      return 2.0 * std::log(r) + 1.0;
    case Kernel::linear:
      return 1.0 / r;
    case Kernel::cubic:
      return 3.0 * r;
  }
  return 0.0;
}

// Homogeneity degree m with phi(s r) = s^m phi(r) for cubic/linear kernels;
// for thin-plate, phi(s r) = s^2 phi(r) + (s^2 log s) r^2 and the extra
// term collapses to a constant under the side conditions (see solver).
inline double kernel_scale_power(Kernel kind) {
  switch (kind) {
    case Kernel::thin_plate:
      return 2.0;
    case Kernel::linear:
      return 1.0;
    case Kernel::cubic:
      return 3.0;
  }
  return 1.0;
}

inline std::string kernel_name(Kernel kind) {
  switch (kind) {
    case Kernel::thin_plate:
      return "r2logr";
    case Kernel::linear:
      return "r";
    case Kernel::cubic:
      return "r3";
  }
  return "?";
}

inline Kernel parse_kernel(const std::string& name) {
  if (name == "r2logr" || name == "thinplate") return Kernel::thin_plate;
  if (name == "r" || name == "linear") return Kernel::linear;
  if (name == "r3" || name == "cubic") return Kernel::cubic;
  throw FormatError("unknown kernel name: " + name);
}

}  // namespace vshape
