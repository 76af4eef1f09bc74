#include "glcorner/extrapolation.hpp"

#include <cmath>

#include <boost/math/tools/roots.hpp>

#include "glcorner/errors.hpp"

namespace glcorner {

namespace {

std::vector<double> differences(const std::vector<double>& v) {
  std::vector<double> d;
  for (size_t i = 1; i < v.size(); ++i) d.push_back(v[i] - v[i - 1]);
  return d;
}

// Differences at or below `floor` are treated as converged (roundoff level).
bool decreasing(const std::vector<double>& d, double floor) {
  if (d.empty()) return false;
  for (size_t i = 1; i < d.size(); ++i)
    if (!(std::abs(d[i]) < std::abs(d[i - 1]) || std::abs(d[i]) <= floor)) return false;
  return true;
}

}  // namespace

SequenceLimit extrapolate_geometric(const std::vector<double>& v, double floor) {
  if (v.size() < 2) throw UsageError("extrapolation needs at least two values");
  SequenceLimit r;
  r.diffs = differences(v);
  r.plateau = decreasing(r.diffs, floor);
  r.limit = v.back();
  r.method = "last";
  if (v.size() >= 3) {
    double d1 = r.diffs[r.diffs.size() - 2], d2 = r.diffs.back();
    double ratio = d1 != 0.0 ? d2 / d1 : 0.0;
    if (ratio > 0.0 && ratio < 1.0) {
      r.limit = v.back() + d2 * ratio / (1.0 - ratio);
      r.method = "aitken";
    }
  }
  r.error = std::max(std::abs(r.diffs.back()), std::abs(r.limit - v.back()));
  return r;
}

SequenceLimit extrapolate_power(const std::vector<double>& xs, const std::vector<double>& v, double floor) {
  if (xs.size() != v.size() || v.size() < 2) throw UsageError("extrapolation needs matching inputs");
  SequenceLimit r;
  r.diffs = differences(v);
  r.plateau = decreasing(r.diffs, floor);
  r.limit = v.back();
  r.method = "last";
  if (v.size() >= 3) {
    size_t n = v.size();
    double x1 = xs[n - 3], x2 = xs[n - 2], x3 = xs[n - 1];
    double a = v[n - 3] - v[n - 2], b = v[n - 2] - v[n - 1];
    if (a != 0.0 && b != 0.0 && a * b > 0) {
      double target = a / b;
      auto g = [&](double p) {
        return (std::pow(x1, -p) - std::pow(x2, -p)) / (std::pow(x2, -p) - std::pow(x3, -p)) - target;
      };
      double lo = 0.05, hi = 30.0;
      if (g(lo) * g(hi) < 0) {
        boost::math::tools::eps_tolerance<double> tol(50);
        std::uintmax_t it = 200;
        auto [pa, pb] = boost::math::tools::bisect(g, lo, hi, tol, it);
        double p = 0.5 * (pa + pb);
        double c = a / (std::pow(x1, -p) - std::pow(x2, -p));
        r.limit = v[n - 1] - c * std::pow(x3, -p);
        r.method = "power";
      }
    }
  }
  r.error = std::max(std::abs(r.diffs.back()), std::abs(r.limit - v.back()));
  return r;
}

LadderLimit extrapolate_limit(const std::vector<double>& Ls, const std::vector<double>& ells,
                              const std::vector<std::vector<double>>& table, double floor) {
  if (Ls.size() < 2 || ells.size() < 2) throw UsageError("ladder needs at least two L and two ell values");
  if (table.size() != Ls.size()) throw UsageError("ladder table does not match L values");
  LadderLimit out;
  out.Ls = Ls;
  out.ells = ells;
  out.table = table;
  out.ell_monotone = true;
  std::vector<double> inner;
  for (const auto& row : table) {
    if (row.size() != ells.size()) throw UsageError("ladder table does not match ell values");
    std::vector<double> usable;
    for (double v : row) {
      if (!std::isfinite(v)) break;
      usable.push_back(v);
    }
    if (usable.size() < 2) throw UsageError("ladder row has fewer than two feasible ell values");
    SequenceLimit s = extrapolate_geometric(usable, floor);
    out.ell_monotone = out.ell_monotone && s.plateau;
    inner.push_back(s.limit);
    out.ell_limits.push_back(s);
  }
  out.L_limit = extrapolate_power(Ls, inner, floor);
  out.L_monotone = out.L_limit.plateau;
  out.limit = out.L_limit.limit;
  out.error_bar = out.L_limit.error;
  for (const auto& s : out.ell_limits) out.error_bar = std::max(out.error_bar, s.error);
  out.plateau = out.ell_monotone && out.L_monotone;
  return out;
}

}  // namespace glcorner
