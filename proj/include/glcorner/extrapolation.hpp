#pragma once

#include <string>
#include <vector>

namespace glcorner {

struct SequenceLimit {
  double limit = 0.0;
  double error = 0.0;           // max(|last difference|, |limit - last value|)
  bool plateau = false;         // |successive differences| decreasing (or below the floor)
  std::vector<double> diffs;
  std::string method;           // "aitken", "power", "last"
};

// Geometric (Aitken delta^2) extrapolation for equally spaced parameters.
SequenceLimit extrapolate_geometric(const std::vector<double>& values, double floor = 0.0);
// Fit v = v_inf + c x^-p through the last three points (x increasing).
SequenceLimit extrapolate_power(const std::vector<double>& xs, const std::vector<double>& values,
                                double floor = 0.0);

struct LadderLimit {
  std::vector<double> Ls, ells;
  std::vector<std::vector<double>> table;  // table[i][j] = E(L_i, ell_j)
  std::vector<SequenceLimit> ell_limits;   // per L
  SequenceLimit L_limit;                   // over the ell-extrapolated values
  double limit = 0.0;
  double error_bar = 0.0;
  bool ell_monotone = false;  // every row has decreasing ell-differences
  bool L_monotone = false;
  bool plateau = false;
};

// Inner extrapolation in ell (geometric), outer in L (power law). NaN cells mark
// infeasible (L, ell) pairs; each row uses its finite prefix.
LadderLimit extrapolate_limit(const std::vector<double>& Ls, const std::vector<double>& ells,
                              const std::vector<std::vector<double>>& table, double floor = 1e-13);

}  // namespace glcorner
