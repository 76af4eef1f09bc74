#include "glcorner/scalar_min.hpp"

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cstdint>
#include <vector>

#include "glcorner/errors.hpp"

namespace glcorner {

ScalarMin brent_minimize(const std::function<double(double)>& f, double a, double c, int bits,
                         int max_iter) {
  if (!(a < c)) throw UsageError("brent_minimize: empty bracket");
  int count = 0;
  auto counted = [&](double x) {
    ++count;
    return f(x);
  };
  std::uintmax_t iters = static_cast<std::uintmax_t>(max_iter);
  auto [x, fx] = boost::math::tools::brent_find_minima(counted, a, c, bits, iters);
  return {x, fx, count};
}

ScalarMin scan_and_minimize(const std::function<double(double)>& f, double lo, double hi, int n,
                            int bits) {
  if (n < 3) throw UsageError("scan_and_minimize: need at least 3 samples");
  std::vector<double> xs(n), fs(n);
  for (int i = 0; i < n; ++i) {
    xs[i] = lo + (hi - lo) * i / (n - 1);
    fs[i] = f(xs[i]);
  }
  int k = static_cast<int>(std::min_element(fs.begin(), fs.end()) - fs.begin());
  int i0 = std::max(0, k - 1), i1 = std::min(n - 1, k + 1);
  ScalarMin best = brent_minimize(f, xs[i0], xs[i1], bits);
  best.evaluations += n;
  if (fs[k] < best.fx) {
    best.x = xs[k];
    best.fx = fs[k];
  }
  return best;
}

}  // namespace glcorner
