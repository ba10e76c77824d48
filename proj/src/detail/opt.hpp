#pragma once

#include <cmath>
#include <functional>
#include <utility>

namespace fel::detail {

struct Max1D {
  double value;
  double arg;
};

// golden-section maximization on [a,b]; assumes unimodality inside the bracket
template <typename F>
Max1D golden_max(F&& f, double a, double b, int iters = 80) {
  constexpr double kInvPhi = 0.6180339887498949;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < iters && (b - a) > 1e-15; ++i) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
  }
  double x = 0.5 * (a + b);
  return {f(x), x};
}

// grid scan followed by golden refinement in the winning cell's neighborhood
template <typename F>
Max1D grid_then_golden_max(F&& f, double lo, double hi, int steps,
                           int refine_rounds = 1) {
  if (hi <= lo) return {f(lo), lo};
  double best_v = -1e300, best_x = lo;
  for (int i = 0; i <= steps; ++i) {
    double x = lo + (hi - lo) * i / steps;
    double v = f(x);
    if (v > best_v) {
      best_v = v;
      best_x = x;
    }
  }
  double h = (hi - lo) / steps;
  for (int r = 0; r < refine_rounds; ++r) {
    auto m = golden_max(f, std::max(lo, best_x - h), std::min(hi, best_x + h));
    if (m.value > best_v) {
      best_v = m.value;
      best_x = m.arg;
    }
    h /= steps > 1 ? steps : 2;
    if (h < 1e-14) break;
  }
  return {best_v, best_x};
}

}  // namespace fel::detail
