#pragma once

// Extended reals are plain doubles carrying +-infinity. The helpers below
// make the two conventions explicit: inf - inf is an error, and 0 * inf = 0.

#include <cmath>
#include <limits>

#include "phiproj/errors.hpp"

namespace phiproj {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline double ext_add(double a, double b) {
  if (std::isinf(a) && std::isinf(b) && (a > 0) != (b > 0)) {
    throw IndeterminateForm("extended-real sum inf - inf");
  }
  return a + b;
}

/// c * x with 0 * (+-inf) = 0.
inline double ext_mul(double c, double x) {
  if (c == 0.0 || x == 0.0) return 0.0;
  return c * x;
}

}  // namespace phiproj
