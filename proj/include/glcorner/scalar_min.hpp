#pragma once

#include <functional>

namespace glcorner {

struct ScalarMin {
  double x = 0.0;
  double fx = 0.0;
  int evaluations = 0;
};

// Brent's method (golden section plus parabolic steps) on [a, c].
ScalarMin brent_minimize(const std::function<double(double)>& f, double a, double c,
                         int bits = 40, int max_iter = 200);

// Samples f on n uniformly spaced points of [lo, hi], then runs Brent on the
// bracket around the smallest sample. Suited to functions that are flat
// outside a window (e.g. zero energy away from the optimum).
ScalarMin scan_and_minimize(const std::function<double(double)>& f, double lo, double hi, int n,
                            int bits = 40);

}  // namespace glcorner
