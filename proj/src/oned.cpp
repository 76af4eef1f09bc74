#include "glcorner/oned.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <tuple>

#include <fmt/format.h>

#include "glcorner/errors.hpp"
#include "glcorner/scalar_min.hpp"
#include "glcorner/spectral.hpp"

namespace glcorner {

namespace {

using Grid = OneDGrid;

void validate(const OneDProblem& p) {
  if (!(p.b > 0) || !std::isfinite(p.b)) throw UsageError("b must be positive");
  if (!(p.T > 0) || !(p.h > 0) || p.h > p.T) throw UsageError("need 0 < h <= T");
  if (!(p.eps >= 0)) throw UsageError("eps must be non-negative");
  if (p.lattice_hs < 0) throw UsageError("lattice spacing must be non-negative");
  if (p.lattice_hs > 0 && p.eps * p.k != 0) throw UsageError("lattice potential is only defined for the flat problem");
}

}  // namespace

OneDGrid make_oned_grid(const OneDProblem& p) {
  validate(p);
  Grid g;
  g.n = p.intervals();
  g.h = p.T / g.n;
  const double ek = p.eps * p.k;
  const int N = g.n + 1;
  g.t.resize(N);
  g.wJ.resize(N);
  g.V.resize(N);
  g.dV.resize(N);
  g.Jm.resize(g.n);
  for (int i = 0; i < N; ++i) {
    double t = i * g.h;
    g.t[i] = t;
    double J = 1.0 - ek * t;
    if (J <= 0.0)
      throw FocalSingularity(fmt::format("focal singularity: 1 - eps k t = {} at t = {} (eps k = {})", J, t, ek));
    double w = (i == 0 || i == g.n) ? 0.5 * g.h : g.h;
    g.wJ[i] = w * J;
    if (p.lattice_hs > 0) {
      double hs = p.lattice_hs, x = (t + p.alpha) * hs;
      g.V[i] = (2.0 - 2.0 * std::cos(x)) / (hs * hs);
      g.dV[i] = 2.0 * std::sin(x) / hs;
    } else {
      double a = t + p.alpha - 0.5 * ek * t * t;
      g.V[i] = a * a / (J * J);
      g.dV[i] = 2.0 * a / (J * J);
    }
  }
  for (int i = 0; i < g.n; ++i) g.Jm[i] = 1.0 - ek * (i + 0.5) * g.h;
  return g;
}

namespace {

Grid make_grid(const OneDProblem& p) { return make_oned_grid(p); }

double energy(const Grid& g, double b, const std::vector<double>& f) {
  double kin = 0.0, pot = 0.0;
  for (int i = 0; i < g.n; ++i) {
    double d = f[i + 1] - f[i];
    kin += g.Jm[i] * d * d;
  }
  for (size_t i = 0; i < f.size(); ++i) {
    double r = f[i] * f[i];
    pot += g.wJ[i] * (g.V[i] * r - (2.0 * r - r * r) / (2.0 * b));
  }
  return kin / g.h + pot;
}

// E(f + d) - E(f) as a sum of local differences (accurate near convergence).
double energy_change(const Grid& g, double b, const std::vector<double>& f, const std::vector<double>& d) {
  double kin = 0.0, pot = 0.0;
  for (int i = 0; i < g.n; ++i) {
    double D = f[i + 1] - f[i], dD = d[i + 1] - d[i];
    kin += g.Jm[i] * dD * (2.0 * D + dD);
  }
  for (size_t i = 0; i < f.size(); ++i) {
    double r = f[i] * f[i];
    double dr = d[i] * (2.0 * f[i] + d[i]);
    double r1 = r + dr;
    pot += g.wJ[i] * (g.V[i] * dr - (2.0 * dr - dr * (r1 + r)) / (2.0 * b));
  }
  return kin / g.h + pot;
}

std::vector<double> gradient(const Grid& g, double b, const std::vector<double>& f) {
  const int N = g.n + 1;
  std::vector<double> gr(N, 0.0);
  for (int i = 0; i < g.n; ++i) {
    double flux = 2.0 * g.Jm[i] * (f[i + 1] - f[i]) / g.h;
    gr[i] -= flux;
    gr[i + 1] += flux;
  }
  for (int i = 0; i < N; ++i) gr[i] += g.wJ[i] * (2.0 * g.V[i] * f[i] - 2.0 * (f[i] - f[i] * f[i] * f[i]) / b);
  return gr;
}

double residual(const Grid& g, const std::vector<double>& gr, const std::vector<double>& f) {
  double r = 0.0;
  for (size_t i = 0; i < gr.size(); ++i) {
    double ri = gr[i] / (2.0 * g.wJ[i]);
    if (f[i] <= 0.0 && ri > 0.0) continue;  // active bound f >= 0
    r = std::max(r, std::abs(ri));
  }
  return r;
}

// Solves the symmetric tridiagonal system (diag, off) x = rhs; returns false
// if a non-positive pivot shows up (matrix not positive definite).
bool solve_spd_tridiagonal(std::vector<double> diag, const std::vector<double>& off, std::vector<double>& x) {
  const size_t n = diag.size();
  std::vector<double> l(n, 0.0);
  for (size_t i = 0; i < n; ++i) {
    if (i > 0) {
      l[i] = off[i - 1] / diag[i - 1];
      diag[i] -= l[i] * off[i - 1];
      x[i] -= l[i] * x[i - 1];
    }
    if (!(diag[i] > 0.0)) return false;
  }
  x[n - 1] /= diag[n - 1];
  for (size_t i = n - 1; i-- > 0;) x[i] = (x[i] - off[i] * x[i + 1]) / diag[i];
  return true;
}

struct FlowOutcome {
  FlowReport rep;
  bool converged = false;
};

FlowOutcome run_flow(const Grid& g, double b, std::vector<double> f, const FlowOptions& opt) {
  const int N = g.n + 1;
  FlowOutcome out;
  for (auto& v : f) v = std::max(v, 0.0);
  double E = energy(g, b, f);
  out.rep.energy_history.push_back(E);
  std::vector<double> gr = gradient(g, b, f);
  double res = residual(g, gr, f);
  double tau = 1.0;
  std::vector<double> diag(N), off(g.n), d(N), step(N);
  int it = 0;
  for (; it < opt.max_iter && res > opt.tol; ++it) {
    bool accepted = false;
    {
      // Newton step with the exact tridiagonal Hessian, used whenever it is
      // positive definite and decreases the energy
      for (int i = 0; i < N; ++i)
        diag[i] = g.wJ[i] * (2.0 * g.V[i] - 2.0 * (1.0 - 3.0 * f[i] * f[i]) / b);
      for (int i = 0; i < g.n; ++i) {
        double c = 2.0 * g.Jm[i] / g.h;
        diag[i] += c;
        diag[i + 1] += c;
        off[i] = -c;
      }
      for (int i = 0; i < N; ++i) d[i] = -gr[i];
      if (solve_spd_tridiagonal(diag, off, d)) {
        for (double s = 1.0; s > 1e-3 && !accepted; s *= 0.5) {
          for (int i = 0; i < N; ++i) step[i] = std::max(f[i] + s * d[i], 0.0) - f[i];
          double dE = energy_change(g, b, f, step);
          if (dE <= 0.0) {
            accepted = true;
            E += dE;
          }
        }
      }
    }
    if (!accepted) {
      // preconditioned projected gradient step, P = K + 2 wJ (V + 1/b)
      for (int i = 0; i < N; ++i) diag[i] = 2.0 * g.wJ[i] * (g.V[i] + 1.0 / b);
      for (int i = 0; i < g.n; ++i) {
        double c = 2.0 * g.Jm[i] / g.h;
        diag[i] += c;
        diag[i + 1] += c;
        off[i] = -c;
      }
      for (int i = 0; i < N; ++i) d[i] = -gr[i];
      solve_spd_tridiagonal(diag, off, d);
      tau = std::min(4.0 * tau, 64.0);
      for (int tries = 0; tries < 60 && !accepted; ++tries, tau *= 0.5) {
        double slope = 0.0;
        for (int i = 0; i < N; ++i) {
          step[i] = std::max(f[i] + tau * d[i], 0.0) - f[i];
          slope += gr[i] * step[i];
        }
        double dE = energy_change(g, b, f, step);
        if (dE <= 1e-4 * slope && dE <= 0.0) {
          accepted = true;
          E += dE;
        }
      }
      if (!accepted) break;  // stagnated at roundoff
    }
    for (int i = 0; i < N; ++i) f[i] += step[i];
    out.rep.energy_history.push_back(E);
    gr = gradient(g, b, f);
    res = residual(g, gr, f);
  }
  out.rep.f = std::move(f);
  out.rep.energy = energy(g, b, out.rep.f);
  out.rep.residual = res;
  out.rep.iterations = it;
  out.converged = res <= opt.tol;
  return out;
}

}  // namespace

int OneDProblem::intervals() const {
  if (!(h > 0) || !(T > 0)) throw UsageError("need positive T and h");
  return std::max(2, static_cast<int>(std::lround(T / h)));
}

double Profile1D::operator()(double tt) const {
  if (t.empty() || tt < 0) return f.empty() ? 0.0 : f.front();
  double h = t[1] - t[0];
  double x = tt / h;
  size_t i = static_cast<size_t>(x);
  if (i + 1 >= t.size()) return tt <= t.back() + 1e-12 ? f.back() : 0.0;
  double w = x - i;
  return (1 - w) * f[i] + w * f[i + 1];
}

std::vector<double> grid_points(const OneDProblem& p) { return make_grid(p).t; }

double f1d_energy(const OneDProblem& p, const std::vector<double>& f) {
  Grid g = make_grid(p);
  if (f.size() != g.t.size()) throw UsageError("profile size does not match the grid");
  return energy(g, p.b, f);
}

std::vector<double> f1d_gradient(const OneDProblem& p, const std::vector<double>& f) {
  Grid g = make_grid(p);
  if (f.size() != g.t.size()) throw UsageError("profile size does not match the grid");
  return gradient(g, p.b, f);
}

double f1d_residual(const OneDProblem& p, const std::vector<double>& f) {
  Grid g = make_grid(p);
  return residual(g, gradient(g, p.b, f), f);
}

double f1d_alpha_derivative(const OneDProblem& p, const std::vector<double>& f) {
  Grid g = make_grid(p);
  double s = 0.0;
  for (size_t i = 0; i < f.size(); ++i) s += g.wJ[i] * g.dV[i] * f[i] * f[i];
  return s;
}

FlowReport minimize_profile(const OneDProblem& p, std::vector<double> init, const FlowOptions& opt) {
  Grid g = make_grid(p);
  const size_t N = g.t.size();
  bool from_half = init.empty();
  if (from_half) init.assign(N, 0.5);
  if (init.size() != N) throw UsageError("initial profile size does not match the grid");
  FlowOutcome out = run_flow(g, p.b, std::move(init), opt);
  if (!out.converged && !from_half) {
    out = run_flow(g, p.b, std::vector<double>(N, 0.5), opt);
    out.rep.restarted = true;
  }
  if (!out.converged)
    throw NumericalError(fmt::format("1D gradient flow did not converge after {} iterations (residual {:.3e})",
                                     out.rep.iterations, out.rep.residual),
                         out.rep.residual);
  return out.rep;
}

OneDResult optimize_alpha(OneDProblem p, double stationarity_tol) {
  make_grid(p);  // validation and focal check up front
  std::vector<double> warm;
  auto solve_at = [&](double a) {
    OneDProblem q = p;
    q.alpha = a;
    bool usable = !warm.empty() && *std::max_element(warm.begin(), warm.end()) > 1e-6;
    FlowReport rep = minimize_profile(q, usable ? warm : std::vector<double>{});
    warm = rep.f;
    return rep;
  };
  ScalarMin best = scan_and_minimize([&](double a) { return solve_at(a).energy; }, -10.0, 2.0, 49, 44);

  OneDResult res;
  if (best.fx > -1e-14) {
    // no surface state: the zero profile at the linear optimum
    p.alpha = theta0_alpha(p);
    res.trivial = true;
    res.alpha = p.alpha;
    res.profile.problem = p;
    res.profile.t = grid_points(p);
    res.profile.f.assign(res.profile.t.size(), 0.0);
    res.energy = 0.0;
    return res;
  }

  // secant polish on dE/dalpha = 0
  double a0 = best.x, a1 = best.x + 1e-6;
  FlowReport r0 = solve_at(a0);
  double g0 = f1d_alpha_derivative({p.b, a0, p.T, p.h, p.eps, p.k, p.lattice_hs}, r0.f);
  for (int it = 0; it < 30; ++it) {
    FlowReport r1 = solve_at(a1);
    OneDProblem q = p;
    q.alpha = a1;
    double g1 = f1d_alpha_derivative(q, r1.f);
    double n2 = 0.0;
    Grid g = make_grid(q);
    for (size_t i = 0; i < r1.f.size(); ++i) n2 += g.wJ[i] * r1.f[i] * r1.f[i];
    if (std::abs(0.5 * g1) <= stationarity_tol * n2 || g1 == g0) {
      a0 = a1;
      break;
    }
    double a2 = a1 - g1 * (a1 - a0) / (g1 - g0);
    a0 = a1;
    g0 = g1;
    a1 = a2;
  }
  p.alpha = a0;
  FlowReport warm_rep = minimize_profile(p, warm);
  FlowReport cold_rep = minimize_profile(p, {});

  Grid g = make_grid(p);
  res.alpha = p.alpha;
  res.profile.problem = p;
  res.profile.t = g.t;
  res.profile.f = cold_rep.energy <= warm_rep.energy ? cold_rep.f : warm_rep.f;
  res.energy = std::min(cold_rep.energy, warm_rep.energy);
  res.residual = f1d_residual(p, res.profile.f);
  res.moment = 0.5 * f1d_alpha_derivative(p, res.profile.f);
  for (size_t i = 0; i < g.t.size(); ++i) res.norm2 += g.wJ[i] * res.profile.f[i] * res.profile.f[i];
  res.warm_cold_gap = std::abs(cold_rep.energy - warm_rep.energy);
  res.warm_cold_agree = res.warm_cold_gap <= 1e-8;
  return res;
}

SurfaceConstants compute_ecorr(double b, double h, double T) {
  static std::mutex mu;
  static std::map<std::tuple<double, double, double>, SurfaceConstants> cache;
  auto key = std::make_tuple(b, h, T);
  {
    std::lock_guard lock(mu);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  OneDProblem p;
  p.b = b;
  p.h = h;
  p.T = T;
  OneDResult r = optimize_alpha(p);
  SurfaceConstants c;
  c.b = b;
  c.h = h;
  c.T = T;
  c.alpha0 = r.alpha;
  c.E0 = r.energy;
  c.f0_at_0 = r.profile.f.front();
  c.trivial = r.trivial;
  c.ecorr = r.trivial ? 0.0 : c.f0_at_0 * c.f0_at_0 / 3.0 - c.alpha0 * c.E0;
  c.profile = r.profile;
  std::lock_guard lock(mu);
  cache.emplace(key, c);
  return c;
}

ExpansionReport expansion_check(double b, double k, const std::vector<double>& eps_list, double h, double T) {
  if (eps_list.empty()) throw UsageError("expansion_check needs at least one eps");
  SurfaceConstants c = compute_ecorr(b, h, T);
  ExpansionReport rep;
  rep.b = b;
  rep.k = k;
  rep.E0 = c.E0;
  rep.ecorr = c.ecorr;
  for (double eps : eps_list) {
    if (!(eps > 0)) throw UsageError("eps must be positive");
    OneDProblem p;
    p.b = b;
    p.h = h;
    p.eps = eps;
    p.k = k;
    p.T = (k == 0.0) ? T : std::min(T, 0.5 / (eps * std::abs(k)));
    OneDResult r = optimize_alpha(p);
    rep.eps.push_back(eps);
    rep.energy.push_back(r.energy);
    rep.residual.push_back(r.energy - c.E0 + eps * k * c.ecorr);
  }
  rep.exact = std::all_of(rep.residual.begin(), rep.residual.end(), [](double r) { return r == 0.0; });
  if (rep.exact) return rep;
  // order by decreasing eps for the monotonicity flag
  std::vector<size_t> idx(rep.eps.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b2) { return rep.eps[a] > rep.eps[b2]; });
  for (size_t j = 1; j < idx.size(); ++j)
    if (std::abs(rep.residual[idx[j]]) >= std::abs(rep.residual[idx[j - 1]])) rep.monotone = false;
  if (rep.eps.size() >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (size_t i = 0; i < rep.eps.size(); ++i) {
      if (rep.residual[i] == 0.0) continue;
      double x = std::log(rep.eps[i]), y = std::log(std::abs(rep.residual[i]));
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      ++n;
    }
    if (n >= 2) {
      rep.exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);
      rep.prefactor = std::exp((sy - rep.exponent * sx) / n);
    }
  }
  return rep;
}

double profile_tail_rate(const Profile1D& prof) {
  std::vector<size_t> support;
  for (size_t i = 0; i < prof.f.size(); ++i)
    if (prof.f[i] > 1e-280) support.push_back(i);
  if (support.size() < 3) throw UsageError("no tail: profile vanishes");
  size_t start = support.size() * 2 / 3;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (size_t j = start; j < support.size(); ++j) {
    double x = prof.t[support[j]], y = std::log(prof.f[support[j]]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 2) throw UsageError("no tail: support too short");
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::string profile_csv(const Profile1D& prof) {
  std::ostringstream os;
  os << "t,f\n";
  for (size_t i = 0; i < prof.t.size(); ++i) os << fmt::format("{:.10g},{:.17g}\n", prof.t[i], prof.f[i]);
  return os.str();
}

double ecorr_slope(double b, double h, double T, double d) {
  if (!(d > 0) || d * T >= 0.5) throw UsageError("slope step must satisfy 0 < d < 0.5 / T");
  auto curved = [&](double k) {
    OneDProblem p;
    p.b = b;
    p.h = h;
    p.T = T;
    p.eps = d;
    p.k = k;
    return optimize_alpha(p).energy;
  };
  return -(curved(1.0) - curved(-1.0)) / (2 * d);
}

}  // namespace glcorner
