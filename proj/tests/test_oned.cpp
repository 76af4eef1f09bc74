#include <doctest.h>

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "glcorner/oned.hpp"
#include "glcorner/spectral.hpp"

using namespace glcorner;

namespace {

// Oracle: cell-centred finite differences for -u'' + (t + a)^2 u on [0, T] with a
// Neumann ghost cell, symmetric tridiagonal eigensolve, golden section over a.
double oracle_lambda(double a, double h, double T) {
  const int n = static_cast<int>(std::lround(T / h));
  Eigen::VectorXd diag(n), off = Eigen::VectorXd::Constant(n - 1, -1.0 / (h * h));
  for (int i = 0; i < n; ++i) {
    double t = (i + 0.5) * h;
    diag[i] = 2.0 / (h * h) + (t + a) * (t + a);
  }
  diag[0] -= 1.0 / (h * h);      // u_{-1} = u_0
  diag[n - 1] -= 1.0 / (h * h);  // Neumann at T as well
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, off, Eigen::EigenvaluesOnly);
  return es.eigenvalues()[0];
}

double oracle_theta0(double h, double T) {
  const double g = (std::sqrt(5.0) - 1) / 2;
  double lo = -1.5, hi = -0.2;
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  double f1 = oracle_lambda(x1, h, T), f2 = oracle_lambda(x2, h, T);
  while (hi - lo > 1e-7) {
    if (f1 < f2) {
      hi = x2, x2 = x1, f2 = f1, x1 = hi - g * (hi - lo), f1 = oracle_lambda(x1, h, T);
    } else {
      lo = x1, x1 = x2, f1 = f2, x2 = lo + g * (hi - lo), f2 = oracle_lambda(x2, h, T);
    }
  }
  return std::min(f1, f2);
}

double trapz(const std::vector<double>& t, const std::vector<double>& y) {
  double s = 0;
  for (size_t i = 1; i < t.size(); ++i) s += 0.5 * (t[i] - t[i - 1]) * (y[i] + y[i - 1]);
  return s;
}

}  // namespace

TEST_SUITE("oned") {
  TEST_CASE("Theta0 matches an independent cell-centred discretization") {
    double oracle = oracle_theta0(0.01, 10.0);
    Theta0Result th = compute_theta0();
    CHECK(th.theta0 == doctest::Approx(oracle).epsilon(2e-4));
    CHECK(th.theta0 == doctest::Approx(0.5901061).epsilon(1e-6));
    CHECK(theta0_shooting().theta0 == doctest::Approx(th.theta0).epsilon(1e-7));
    CHECK(th.alpha == doctest::Approx(-std::sqrt(th.theta0)).epsilon(1e-4));
  }

  TEST_CASE("b = 1.5 minimizer: virial identity, moment condition, alpha scan") {
    OneDProblem p;
    p.b = 1.5;
    OneDResult r = optimize_alpha(p);
    REQUIRE_FALSE(r.trivial);
    CHECK(r.energy < 0);
    const auto& f = r.profile.f;
    const auto& t = r.profile.t;
    std::vector<double> f4(f.size()), mom(f.size()), f2(f.size());
    for (size_t i = 0; i < f.size(); ++i) {
      f4[i] = std::pow(f[i], 4);
      mom[i] = (t[i] + r.alpha) * f[i] * f[i];
      f2[i] = f[i] * f[i];
    }
    // E = -(1/2b) int f^4 holds exactly for the discrete Euler-Lagrange equation
    CHECK(r.energy == doctest::Approx(-trapz(t, f4) / (2 * p.b)).epsilon(1e-7));
    CHECK(std::abs(trapz(t, mom)) <= 1e-6 * trapz(t, f2));
    for (double da : {-0.2, -0.05, -0.01, 0.01, 0.05, 0.2}) {
      OneDProblem q = p;
      q.alpha = r.alpha + da;
      CHECK(minimize_profile(q).energy >= r.energy - 1e-12);
    }
    CHECK(r.warm_cold_agree);
  }

  TEST_CASE("constants at b = 1.5 agree with a finer grid") {
    SurfaceConstants c = compute_ecorr(1.5);
    SurfaceConstants f = compute_ecorr(1.5, 0.005);
    CHECK(c.alpha0 == doctest::Approx(f.alpha0).epsilon(1e-4));
    CHECK(c.E0 == doctest::Approx(f.E0).epsilon(1e-3));
    CHECK(c.f0_at_0 == doctest::Approx(f.f0_at_0).epsilon(1e-3));
    CHECK(c.ecorr == doctest::Approx(f.ecorr).epsilon(1e-3));
    CHECK(f.E0 == doctest::Approx(-0.0076068).epsilon(1e-4));
    CHECK(f.ecorr == doctest::Approx(0.0432475).epsilon(1e-4));
  }

  TEST_CASE("E_corr: formula and slope routes agree") {
    SurfaceConstants c = compute_ecorr(1.5);
    double slope = ecorr_slope(1.5);
    CHECK(std::abs(slope - c.ecorr) <= 0.01 * std::abs(c.ecorr));
  }

  TEST_CASE("normal regime above the surface threshold") {
    OneDProblem p;
    p.b = 1.2 / 0.5901061257;
    OneDResult r = optimize_alpha(p);
    CHECK(r.trivial);
    CHECK(std::abs(r.energy) <= 1e-8);
    CHECK_THROWS_AS(profile_tail_rate(r.profile), UsageError);
  }

  TEST_CASE("curvature expansion residual decays faster than eps^1.4") {
    for (double k : {1.0, -1.0}) {
      ExpansionReport e = expansion_check(1.5, k, {0.08, 0.04, 0.02});
      CAPTURE(k);
      CHECK(e.exponent >= 1.4);
      CHECK(e.monotone);
    }
    CHECK(expansion_check(1.5, 0.0, {0.05}).exact);
  }

  TEST_CASE("gradient matches central differences of the energy") {
    OneDProblem p;
    p.b = 1.4;
    p.alpha = -0.6;
    p.T = 6;
    p.h = 0.1;
    p.eps = 0.05;
    p.k = 0.7;
    std::vector<double> f = grid_points(p);
    for (auto& v : f) v = 0.6 * std::exp(-0.3 * v * v) + 0.05;
    std::vector<double> g = f1d_gradient(p, f);
    for (size_t i : {size_t{0}, size_t{7}, f.size() - 1}) {
      auto fp = f, fm = f;
      fp[i] += 1e-6;
      fm[i] -= 1e-6;
      CHECK(g[i] == doctest::Approx((f1d_energy(p, fp) - f1d_energy(p, fm)) / 2e-6).epsilon(1e-6));
    }
    double da = (f1d_energy({p.b, p.alpha + 1e-6, p.T, p.h, p.eps, p.k}, f) -
                 f1d_energy({p.b, p.alpha - 1e-6, p.T, p.h, p.eps, p.k}, f)) / 2e-6;
    CHECK(f1d_alpha_derivative(p, f) == doctest::Approx(da).epsilon(1e-6));
  }

  TEST_CASE("grid halving: second-order energy on a smooth profile") {
    auto energy = [](double h) {
      OneDProblem p;
      p.b = 1.5;
      p.alpha = -0.78;
      p.T = 10;
      p.h = h;
      std::vector<double> f = grid_points(p);
      for (auto& v : f) v = 0.4 * std::exp(-0.5 * v * v);
      return f1d_energy(p, f);
    };
    double e1 = energy(0.04), e2 = energy(0.02), e3 = energy(0.01);
    double order = std::log2(std::abs(e1 - e2) / std::abs(e2 - e3));
    CHECK(order >= 1.9);
  }

  TEST_CASE("curved problems refuse the focal point") {
    OneDProblem p;
    p.eps = 0.1;
    p.k = 1.0;
    p.T = 15;
    std::vector<double> f(p.intervals() + 1, 0.5);
    CHECK_THROWS_AS(f1d_energy(p, f), FocalSingularity);
  }

  TEST_CASE("profile tail decays") {
    SurfaceConstants c = compute_ecorr(1.5);
    CHECK(profile_tail_rate(c.profile) < 0);  // log-slope of the tail
    CHECK(profile_csv(c.profile).rfind("t,f", 0) == 0);
  }
}
