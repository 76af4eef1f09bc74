#include "glcorner/spectral.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include <boost/numeric/odeint.hpp>

#include <fmt/format.h>

#include "glcorner/errors.hpp"
#include "glcorner/gl2d.hpp"
#include "glcorner/lanczos.hpp"
#include "glcorner/mesh.hpp"
#include "glcorner/scalar_min.hpp"

namespace glcorner {

// Empirical constant in |mu_h - mu| ~ C h^2 for the graded sector meshes.
static constexpr double kSectorDiscretizationConstant = 0.04;

double linear_ground_energy(const OneDProblem& p) {
  OneDGrid g = make_oned_grid(p);
  const int N = g.n + 1;
  Eigen::VectorXd diag(N), off(N - 1);
  for (int i = 0; i < N; ++i) {
    double k = (i > 0 ? g.Jm[i - 1] : 0.0) + (i < g.n ? g.Jm[i] : 0.0);
    diag[i] = k / (g.h * g.wJ[i]) + g.V[i];
  }
  for (int i = 0; i < g.n; ++i) off[i] = -g.Jm[i] / (g.h * std::sqrt(g.wJ[i] * g.wJ[i + 1]));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, off, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("tridiagonal eigensolver failed");
  return es.eigenvalues()[0];
}

double theta0_alpha(OneDProblem p) {
  auto lam = [&](double a) {
    p.alpha = a;
    return linear_ground_energy(p);
  };
  return scan_and_minimize(lam, -3.0, 1.0, 17, 50).x;
}

Theta0Result compute_theta0(double h, double T) {
  if (!(h > 0) || !(T > 0)) throw UsageError("theta0 needs positive h and T");
  Theta0Result r;
  r.h = h;
  r.T = T;
  OneDProblem p;
  p.T = T;
  auto solve = [&](double hh, double& alpha) {
    p.h = hh;
    auto lam = [&](double a) {
      p.alpha = a;
      return linear_ground_energy(p);
    };
    ScalarMin m = scan_and_minimize(lam, -3.0, 1.0, 17, 50);
    alpha = m.x;
    return m.fx;
  };
  double a_coarse = 0.0;
  r.coarse = solve(h, a_coarse);
  r.fine = solve(h / 2, r.alpha);
  r.theta0 = (4.0 * r.fine - r.coarse) / 3.0;
  r.error_estimate = std::abs(r.fine - r.coarse) / 3.0;
  return r;
}

namespace {

// true when the solution started at t = 0 with u = 1, u' = 0 has a zero before t_max
bool crosses_zero(double lambda, double alpha, double t_max, double tol) {
  namespace ode = boost::numeric::odeint;
  using State = std::array<double, 2>;
  State u{1.0, 0.0};
  auto rhs = [&](const State& x, State& dx, double t) {
    dx[0] = x[1];
    dx[1] = ((t + alpha) * (t + alpha) - lambda) * x[0];
  };
  auto stepper = ode::make_controlled(tol, tol, ode::runge_kutta_dopri5<State>());
  bool crossed = false;
  double t = 0.0, dt = 1e-3;
  while (t < t_max && !crossed) {
    ode::controlled_step_result res = stepper.try_step(rhs, u, t, dt);
    if (res == ode::success) {
      crossed = u[0] < 0.0;
      dt = std::min(dt, t_max - t);
      if (dt <= 0) break;
    }
  }
  return crossed;
}

}  // namespace

ShootingResult theta0_shooting(double t_max, double tol) {
  if (!(t_max > 2) || !(tol > 0)) throw UsageError("shooting needs t_max > 2 and tol > 0");
  auto lambda_of = [&](double alpha) {
    double lo = 0.0, hi = 1.0 + alpha * alpha;
    while (hi - lo > 1e-12) {
      double mid = 0.5 * (lo + hi);
      (crosses_zero(mid, alpha, t_max, tol) ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
  };
  ScalarMin m = brent_minimize(lambda_of, -1.5, -0.2, 30);
  return {m.fx, m.x};
}

void SectorSpec::validate() const {
  if (!(beta > 0) || !(beta < 2 * std::numbers::pi)) throw UsageError("beta must lie in (0, 2 pi)");
  if (!(R > 0) || !(h > 0)) throw UsageError("sector radius and spacing must be positive");
  if (!(tol > 0) || !(accuracy > 0)) throw UsageError("eigen tolerance and accuracy must be positive");
}

namespace {

struct SectorSolve {
  LanczosResult eig;
  int nodes = 0;
};

SectorSolve solve_sector(double beta, double R, double h, double tol) {
  Mesh2D mesh = build_sector_mesh(beta, R, h);
  Connection conn = make_connection(mesh, 1.0);
  std::vector<int> fidx(mesh.nodes.size());
  int k = 0;
  for (size_t i = 0; i < fidx.size(); ++i) fidx[i] = mesh.tag[i] == NodeTag::Dirichlet ? -1 : k++;
  SparseC K = magnetic_matrix(mesh, conn, fidx);
  Eigen::VectorXd M(k);
  for (size_t i = 0; i < fidx.size(); ++i)
    if (fidx[i] >= 0) M[fidx[i]] = mesh.mass[i];
  SectorSolve s;
  s.eig = smallest_eigenpair(K, M, tol, 0.0);
  s.nodes = mesh.num_nodes();
  return s;
}

}  // namespace

EigenResult compute_mu(const SectorSpec& spec) {
  spec.validate();
  EigenResult r;
  r.discretization_estimate = kSectorDiscretizationConstant * spec.h * spec.h;
  if (r.discretization_estimate > spec.accuracy)
    throw UsageError(fmt::format("sector mesh spacing {} is too coarse for accuracy {:.1e}; use h <= {:.3g}", spec.h,
                                 spec.accuracy, std::sqrt(spec.accuracy / kSectorDiscretizationConstant)));
  SectorSolve s = solve_sector(spec.beta, spec.R, spec.h, spec.tol);
  r.value = s.eig.value;
  r.residual = s.eig.residual;
  r.vector = s.eig.vector;
  r.nodes = s.nodes;
  r.iterations = s.eig.iterations;
  if (spec.estimate_truncation) {
    SectorSolve half = solve_sector(spec.beta, spec.R / 2, spec.h, spec.tol);
    r.truncation_sensitivity = std::abs(half.eig.value - r.value);
  }
  return r;
}

CriticalFields critical_fields(double eps, const CurvilinearPolygon& poly, double theta0,
                               const std::function<double(double)>& mu_of) {
  if (!(eps > 0)) throw UsageError("eps must be positive");
  if (!(theta0 > 0 && theta0 < 1)) throw UsageError("theta0 must lie in (0, 1)");
  CriticalFields cf;
  cf.eps = eps;
  cf.theta0 = theta0;
  cf.hc2 = 1.0 / (eps * eps);
  cf.hstar = 1.0 / (theta0 * eps * eps);
  struct Entry {
    double beta, mu, field;
  };
  std::vector<Entry> list;
  for (const auto& c : poly.corners()) {
    double mu = mu_of(c.beta);
    double eff = std::min(mu, theta0);
    list.push_back({c.beta, mu, 1.0 / (eff * eps * eps)});
  }
  std::stable_sort(list.begin(), list.end(), [](const Entry& a, const Entry& b) { return a.field < b.field; });
  for (const auto& e : list) {
    cf.betas.push_back(e.beta);
    cf.mus.push_back(e.mu);
    cf.corner_fields.push_back(e.field);
  }
  return cf;
}

}  // namespace glcorner
