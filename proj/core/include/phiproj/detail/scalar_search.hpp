#pragma once

#include <cmath>
#include <utility>

namespace phiproj::detail {

/// Golden-section search for the minimum of a unimodal function on [lo, hi].
/// Values may be +inf. Returns {argmin, min} over every point evaluated, so
/// the result never exceeds min(f(lo), f(hi)) or any interior probe.
template <typename F>
std::pair<double, double> golden_minimize(F&& f, double lo, double hi,
                                          int max_iter = 200,
                                          double x_tol = 0.0) {
  constexpr double kInvPhi = 0.6180339887498948482;
  double best_x = lo;
  double best_f = f(lo);
  auto consider = [&](double x, double fx) {
    if (fx < best_f) {
      best_f = fx;
      best_x = x;
    }
  };
  consider(hi, f(hi));

  double a = lo;
  double b = hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c);
  double fd = f(d);
  consider(c, fc);
  consider(d, fd);
  for (int it = 0; it < max_iter; ++it) {
    if (!(b - a > x_tol) || b - a <= 4.0 * 2.2e-16 * (std::abs(a) + std::abs(b))) break;
    // Both probes infinite: keep the half that holds the best point so far.
    bool go_left = fc < fd || (std::isinf(fc) && std::isinf(fd) && best_x < c);
    if (go_left) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
      consider(c, fc);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
      consider(d, fd);
    }
  }
  return {best_x, best_f};
}

template <typename F>
std::pair<double, double> golden_maximize(F&& f, double lo, double hi,
                                          int max_iter = 200) {
  auto [x, v] = golden_minimize([&](double s) { return -f(s); }, lo, hi, max_iter);
  return {x, -v};
}

}  // namespace phiproj::detail
