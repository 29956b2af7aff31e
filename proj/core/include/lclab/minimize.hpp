#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "lclab/numeric.hpp"

namespace lclab {

struct MinimizeResult {
  double x = 0.0;
  double f = kPosInf;
  bool at_boundary = false;  // grid minimum sat on an interval edge
};

/// Grid-seeded bracketed golden-section minimization. The objective may
/// return +inf on inadmissible points; those seed the grid but never win.
/// `rel_width` terminates when the bracket width drops below
/// rel_width * (|x| + rel_width).
template <class F>
MinimizeResult minimize_grid_golden(F&& f, double a, double b, int grid_points,
                                    double rel_width) {
  static const double kInvPhi = (std::sqrt(5.0) - 1.0) / 2.0;

  MinimizeResult out;
  if (!(a < b)) {
    out.x = a;
    out.f = f(a);
    return out;
  }
  const int n = grid_points < 3 ? 3 : grid_points;
  std::vector<double> xs(n), fs(n);
  int best = -1;
  for (int i = 0; i < n; ++i) {
    xs[i] = a + (b - a) * static_cast<double>(i) / (n - 1);
    fs[i] = f(xs[i]);
    if (best < 0 || fs[i] < fs[best]) best = i;
  }
  if (best < 0 || fs[best] == kPosInf) {
    out.x = xs[0];
    out.f = kPosInf;
    out.at_boundary = true;
    return out;
  }
  int lo = best > 0 ? best - 1 : best;
  int hi = best < n - 1 ? best + 1 : best;
  out.at_boundary = (best == 0 || best == n - 1) ||
                    fs[lo] == kPosInf || fs[hi] == kPosInf;

  double x0 = xs[lo], x3 = xs[hi];
  double x1 = x3 - kInvPhi * (x3 - x0);
  double x2 = x0 + kInvPhi * (x3 - x0);
  double f1 = f(x1), f2 = f(x2);
  int iter = 0;
  while (std::abs(x3 - x0) > rel_width * (std::abs(x1) + rel_width) && iter++ < 400) {
    if (f1 < f2) {
      x3 = x2;
      x2 = x1;
      f2 = f1;
      x1 = x3 - kInvPhi * (x3 - x0);
      f1 = f(x1);
    } else {
      x0 = x1;
      x1 = x2;
      f1 = f2;
      x2 = x0 + kInvPhi * (x3 - x0);
      f2 = f(x2);
    }
  }
  if (f1 < f2) {
    out.x = x1;
    out.f = f1;
  } else {
    out.x = x2;
    out.f = f2;
  }
  // Keep the grid winner if refinement wandered onto a worse point
  // (possible when the valid region is a sub-interval).
  if (fs[best] < out.f) {
    out.x = xs[best];
    out.f = fs[best];
  }
  return out;
}

}  // namespace lclab
