#pragma once

#include <string>
#include <vector>

namespace glcorner {

// Discrete 1D problem on t in [0, T] with natural (Neumann) ends.
//   F[f] = int J f'^2 + J V f^2 - J (2 f^2 - f^4) / (2b),   J = 1 - eps k t
// with V = (t + alpha - eps k t^2 / 2)^2 / J^2. When lattice_hs > 0 the
// tangential symbol (t+alpha)^2 is replaced by (2 - 2 cos((t+alpha) hs)) / hs^2,
// which matches the split-rectangle 2D discretization (flat case only).
struct OneDProblem {
  double b = 1.5;
  double alpha = 0.0;
  double T = 15.0;
  double h = 0.01;
  double eps = 0.0;
  double k = 0.0;
  double lattice_hs = 0.0;

  int intervals() const;
  double spacing() const { return T / intervals(); }
};

// Grid data: nodes t, trapezoid weight times J at nodes, J at midpoints,
// potential V and dV/dalpha at nodes.
struct OneDGrid {
  int n = 0;  // intervals
  double h = 0.0;
  std::vector<double> t, wJ, Jm, V, dV;
};
OneDGrid make_oned_grid(const OneDProblem& p);

struct Profile1D {
  OneDProblem problem;
  std::vector<double> t;
  std::vector<double> f;
  // Linear interpolation, zero beyond T.
  double operator()(double tt) const;
};

struct FlowReport {
  std::vector<double> f;
  double energy = 0.0;
  double residual = 0.0;  // sup norm of the discrete Euler-Lagrange residual
  int iterations = 0;
  bool restarted = false;
  std::vector<double> energy_history;
};

struct FlowOptions {
  double tol = 1e-9;
  int max_iter = 20000;
};

struct OneDResult {
  Profile1D profile;
  double alpha = 0.0;
  double energy = 0.0;
  double residual = 0.0;
  double moment = 0.0;   // (1/2) dF/dalpha, equals int (t+alpha) f^2 in the flat case
  double norm2 = 0.0;    // int f^2 (weighted)
  bool warm_cold_agree = true;
  double warm_cold_gap = 0.0;
  bool trivial = false;  // f == 0: b at or beyond the surface threshold
};

// Energy of a nodal vector; throws FocalSingularity when 1 - eps k t <= 0 on the grid.
double f1d_energy(const OneDProblem& p, const std::vector<double>& f);
// Exact gradient of f1d_energy with respect to nodal values.
std::vector<double> f1d_gradient(const OneDProblem& p, const std::vector<double>& f);
// Sup norm of gradient / (2 w_i J_i): the discrete Euler-Lagrange residual.
double f1d_residual(const OneDProblem& p, const std::vector<double>& f);
// Exact derivative of the energy with respect to alpha at fixed f.
double f1d_alpha_derivative(const OneDProblem& p, const std::vector<double>& f);
std::vector<double> grid_points(const OneDProblem& p);

// Projected gradient flow (f >= 0) with monotone energy decrease, finished by
// energy-checked Newton steps. Empty init means f == 1/2.
FlowReport minimize_profile(const OneDProblem& p, std::vector<double> init = {}, const FlowOptions& opt = {});

// Minimizes over alpha in [-10, 2]; the f-problem is warm-started along the
// search and cross-checked against a cold start at the optimum.
OneDResult optimize_alpha(OneDProblem p, double stationarity_tol = 1e-10);

struct SurfaceConstants {
  double b = 0.0;
  double alpha0 = 0.0;
  double E0 = 0.0;
  double f0_at_0 = 0.0;
  double ecorr = 0.0;  // (1/3) f0(0)^2 - alpha0 E0
  double h = 0.0;
  double T = 0.0;
  bool trivial = false;
  Profile1D profile;
};

// E_corr and friends at the given resolution; results are cached per (b, h, T).
SurfaceConstants compute_ecorr(double b, double h = 0.01, double T = 15.0);

// Second route to E_corr: -(E(eps k = d) - E(eps k = -d)) / (2 d) from curved problems.
double ecorr_slope(double b, double h = 0.01, double T = 15.0, double d = 1e-3);

struct ExpansionReport {
  double b = 0.0, k = 0.0;
  std::vector<double> eps, energy, residual;  // residual = E_k - E0 + eps k E_corr
  double E0 = 0.0, ecorr = 0.0;
  double exponent = 0.0, prefactor = 0.0;
  bool exact = false;        // k == 0: residual vanishes identically
  bool monotone = true;      // |residual| decreases with eps
};

// Curved energies for each eps (truncated at min(T, 0.5/(eps|k|))) and the
// least-squares fit log|r| = p log eps + log C.
ExpansionReport expansion_check(double b, double k, const std::vector<double>& eps_list, double h = 0.01,
                                double T = 15.0);

// Least-squares slope of log f over the last third of the nonzero support.
// Throws UsageError("no tail") for the zero profile.
double profile_tail_rate(const Profile1D& prof);

std::string profile_csv(const Profile1D& prof);

}  // namespace glcorner
