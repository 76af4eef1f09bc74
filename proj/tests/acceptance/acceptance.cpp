// One PASS/FAIL line per acceptance criterion. Everything is recomputed (no cache).
// Usage: glcorner_acceptance [--only N,...] [--expect-fail N,...]
// Exit status is 0 when the failing criteria are exactly the expected ones.
#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "glcorner/commands.hpp"
#include "glcorner/corner.hpp"
#include "glcorner/geometry.hpp"
#include "glcorner/oned.hpp"
#include "glcorner/spectral.hpp"
#include "glcorner/surface.hpp"
#include "support/properties.hpp"

using namespace glcorner;
using std::numbers::pi;

namespace {

// Pinned tolerances.
constexpr double kTheta0Agree = 2e-3;
constexpr double kTheta0Seconds = 10;
constexpr double kSectorMargin = 5;
constexpr double kMuFlat = 5e-3;
constexpr double kSectorSeconds = 120;
constexpr double kMoment = 1e-6;
constexpr double kNormalE0 = 1e-8;
constexpr double kExpansionExponent = 1.4;
constexpr double kEcorrAgree = 0.01;
constexpr double kCornerRelError = 0.02;
constexpr double kCornerSeconds = 1800;
constexpr double kFlatCorner = 3;  // multiples of the solver tolerance
constexpr double kSmoothEnergy = 0.03;
constexpr double kSmoothSeconds = 900;
constexpr double kProfileDeviation = 0.05;
constexpr double kAgmonMass = 1e-3;
constexpr double kDegree = 0.1;
constexpr double kGaussBonnet = 1e-8;
constexpr double kGauge = 1e-12;
constexpr double kCurl = 1e-12;
constexpr double kOrder = 1.9;

struct Line {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::set<int> parse_list(const std::string& s) {
  std::set<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.insert(std::stoi(item));
  return out;
}

CommandContext fresh() {
  CommandContext ctx;
  ctx.use_cache = false;
  return ctx;
}

Line theta0_bracket() {
  auto t0 = std::chrono::steady_clock::now();
  Theta0Result fd = compute_theta0();
  ShootingResult sh = theta0_shooting();
  double secs = seconds_since(t0);
  double gap = std::abs(fd.theta0 - sh.theta0);
  bool ok = fd.theta0 > 0 && fd.theta0 < 1 && gap <= kTheta0Agree && secs < kTheta0Seconds;
  return {ok, fmt::format("Theta0 FD {:.10f}, shooting {:.10f}, gap {:.1e} (<= {:.0e}), {:.1f} s", fd.theta0,
                          sh.theta0, gap, kTheta0Agree, secs)};
}

Line sector_inequality(double theta0) {
  auto t0 = std::chrono::steady_clock::now();
  SectorSpec right;
  right.beta = pi / 2;
  EigenResult mr = compute_mu(right);
  double t_right = seconds_since(t0);
  t0 = std::chrono::steady_clock::now();
  SectorSpec flat;
  flat.beta = pi;
  EigenResult mf = compute_mu(flat);
  double t_flat = seconds_since(t0);
  double sens = std::max(mr.truncation_sensitivity, mr.discretization_estimate);
  bool ok = mr.value < theta0 - kSectorMargin * sens && std::abs(mf.value - theta0) <= kMuFlat &&
            t_right < kSectorSeconds && t_flat < kSectorSeconds;
  return {ok, fmt::format("mu(pi/2) {:.6f} < Theta0 - 5*{:.1e} = {:.6f}; |mu(pi) - Theta0| = {:.1e} (<= {:.0e}); "
                          "{:.0f} s, {:.0f} s",
                          mr.value, sens, theta0 - kSectorMargin * sens, std::abs(mf.value - theta0), kMuFlat,
                          t_right, t_flat)};
}

Line oned_stationarity(double theta0) {
  bool ok = true;
  std::string detail;
  for (double b : {1.25, 1.5, 1.75}) {
    OneDProblem p;
    p.b = b;
    OneDResult r = optimize_alpha(p);
    bool sub = std::abs(r.moment) <= kMoment * r.norm2 && r.energy < 0;
    ok = ok && sub;
    detail += fmt::format("b={}: E0 {:.3e}, |moment| {:.1e}{}; ", b, r.energy, std::abs(r.moment),
                          sub ? "" : b >= 1 / theta0 ? " FAIL (b > 1/Theta0: normal state, E0 = 0)" : " FAIL");
  }
  OneDProblem p;
  p.b = 1.2 / theta0;
  OneDResult r = optimize_alpha(p);
  bool sub = std::abs(r.energy) <= kNormalE0;
  ok = ok && sub;
  detail += fmt::format("b=1.2/Theta0: |E0| {:.1e} (<= {:.0e})", std::abs(r.energy), kNormalE0);
  return {ok, detail};
}

Line expansion() {
  bool ok = true;
  std::string detail;
  for (double k : {1.0, -1.0}) {
    ExpansionReport e = expansion_check(1.5, k, {0.08, 0.04, 0.02, 0.01});
    ok = ok && e.exponent >= kExpansionExponent;
    detail += fmt::format("k={:+.0f}: exponent {:.3f}; ", k, e.exponent);
  }
  SurfaceConstants c = compute_ecorr(1.5);
  double slope = ecorr_slope(1.5);
  double rel = std::abs(slope - c.ecorr) / std::abs(c.ecorr);
  ok = ok && rel <= kEcorrAgree;
  detail += fmt::format("E_corr {:.8f} vs slope {:.8f} (rel {:.1e})", c.ecorr, slope, rel);
  return {ok, detail};
}

Line corner_convergence() {
  RunRecord r = run_command("corner", merge_params("corner", {{"beta_pi", 0.5}}, {}), fresh());
  const Json& j = r.result;
  bool has_limit = !j["limit"].is_null();
  double limit = j["extrapolated"].get<double>(), bar = j["error_bar"].get<double>();
  double secs = j["seconds"].get<double>();
  bool ok = j["ell_monotone"].get<bool>() && j["L_monotone"].get<bool>() && has_limit &&
            bar <= kCornerRelError * std::abs(limit) && secs < kCornerSeconds;
  return {ok, fmt::format("E_corner(pi/2) {:.9f} +- {:.2e} ({:.2f}%), ell/L monotone {}/{}, {:.0f} s", limit, bar,
                          100 * bar / std::abs(limit), j["ell_monotone"].get<bool>(), j["L_monotone"].get<bool>(),
                          secs)};
}

Line flat_angle() {
  Json params = merge_params("conjecture", Json::object(), Json::object());
  RunRecord r = run_command("conjecture", params, fresh());
  const Json& j = r.result;
  const double tol = params["tol"].get<double>();
  double C = j["C"].get<double>();
  double expo = j["deviation_exponent"].get<double>();
  double flat = j["flat_energy"].get<double>();
  bool bound = std::isfinite(C);
  for (const auto& row : j["rows"]) {
    double d = std::abs(row["delta"].get<double>());
    if (d > 0) bound = bound && std::abs(row["deviation"].get<double>()) <= C * std::pow(d, 4.0 / 3) * (1 + 1e-12);
  }
  bool ok = bound && expo >= 4.0 / 3 && std::abs(flat) <= kFlatCorner * tol;
  return {ok, fmt::format("C = {:.5f} bounds all six deltas, deviation ~ delta^{:.2f} (>= 4/3), |E(pi)| {:.1e} "
                          "(<= 3*{:.0e})",
                          C, expo, std::abs(flat), tol)};
}

struct DiscChecks {
  Line energy, profile, degree;
};

DiscChecks disc_run() {
  auto t0 = std::chrono::steady_clock::now();
  CurvilinearPolygon disc = make_disc(1.0);
  SurfaceRunOptions opt;
  opt.eps = 0.04;
  opt.b = 1.5;
  SurfaceRun run = solve_surface(disc, opt);
  double secs = seconds_since(t0);
  DiscChecks d;
  double rel = std::abs(run.report.energy - run.predicted_energy) / std::abs(run.predicted_energy);
  d.energy = {rel <= kSmoothEnergy && secs < kSmoothSeconds,
              fmt::format("E {:.6f} vs |dOmega|E0/eps - 2 pi E_corr = {:.6f} (rel {:.2f}% <= 3%), winner {}, {:.0f} s",
                          run.report.energy, run.predicted_energy, 100 * rel, run.winner, secs)};
  double mass6 = 0;
  for (size_t i = 0; i < run.agmon.d.size(); ++i)
    if (std::abs(run.agmon.d[i] - 6 * opt.eps) < 1e-9) mass6 = run.agmon.mass[i];
  d.profile = {run.deviation <= kProfileDeviation && mass6 <= kAgmonMass,
               fmt::format("sup ||psi| - f0| = {:.4f} (<= {}), mass beyond 6 eps {:.1e} (<= {:.0e})", run.deviation,
                           kProfileDeviation, mass6, kAgmonMass)};
  const double eps = opt.eps, a0 = run.sc.alpha0;
  const double boundary_term = disc.perimeter() * std::abs(a0) / (2 * pi * eps);
  double gap = std::abs(std::abs(run.winding) - run.predicted_degree);
  double literal = std::abs(std::abs(run.winding) - disc.area() / (eps * eps) + a0 / eps);
  d.degree = {run.winding_ok && gap <= kDegree * boundary_term,
              fmt::format("winding {}, predicted |Omega|/(2 pi eps^2) + |dOmega| alpha0/(2 pi eps) = {:.3f}, gap {:.3f} "
                          "(<= 0.1*{:.3f}); literal |deg - |Omega|/eps^2 + alpha0/eps| = {:.1f}",
                          run.winding, run.predicted_degree, gap, boundary_term, literal)};
  return d;
}

Line geometry() {
  double worst = 0;
  for (const char* name : {"disc", "square", "stadium", "notched_pentagon"})
    worst = std::max(worst, std::abs(gauss_bonnet_defect(builtin_shape(name))));
  return {worst <= kGaussBonnet, fmt::format("max Gauss-Bonnet defect {:.1e} (<= {:.0e})", worst, kGaussBonnet)};
}

Line properties() {
  using namespace glcorner::testing;
  Mesh2D disc = small_disc_mesh();
  Mesh2D rect = flat_rectangle_mesh(0.4);
  double gauge = std::max(gauge_defect(disc, 0.2, 10, 1), gauge_defect(rect, 1.0, 10, 2));
  double curl = std::max(curl_defect(disc), curl_defect(rect));
  DescentCheck dc = descent_check(disc, 0.2, 1.5, 3);
  double o1 = order_1d(0.04), o2 = order_2d(0.4);
  bool ok = gauge <= kGauge && curl <= kCurl && dc.max_change <= 0 && dc.converged && o1 >= kOrder && o2 >= kOrder;
  return {ok, fmt::format("gauge {:.1e}, curl {:.1e}, {} accepted steps with max dE {:.1e}, orders 1D {:.3f} 2D {:.3f}",
                          gauge, curl, dc.accepted, dc.max_change, o1, o2)};
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only, expected;
  for (int i = 1; i + 1 < argc; i += 2) {
    std::string a = argv[i];
    if (a == "--only") only = parse_list(argv[i + 1]);
    else if (a == "--expect-fail") expected = parse_list(argv[i + 1]);
    else {
      std::cerr << "usage: glcorner_acceptance [--only N,...] [--expect-fail N,...]\n";
      return 2;
    }
  }
  auto wanted = [&](int n) { return only.empty() || only.count(n); };

  const double theta0 = compute_theta0().theta0;
  std::vector<std::pair<int, std::function<Line()>>> plan = {
      {1, theta0_bracket},
      {2, [&] { return sector_inequality(theta0); }},
      {3, [&] { return oned_stationarity(theta0); }},
      {4, expansion},
      {5, corner_convergence},
      {6, flat_angle},
      {10, geometry},
      {11, properties},
  };
  const char* names[] = {"",
                         "Theta0 bracket",
                         "sector inequality",
                         "1D stationarity",
                         "curvature expansion",
                         "corner-energy convergence",
                         "flat-angle conjecture",
                         "smooth-domain energy",
                         "profile and decay",
                         "degree",
                         "geometry exactness",
                         "property suites"};
  std::map<int, Line> lines;
  auto report = [&](int n, const Line& l) {
    lines[n] = l;
    std::cout << fmt::format("[{}] {:>2} {}: {}", l.pass ? "PASS" : "FAIL", n, names[n], l.detail) << std::endl;
  };
  auto guarded = [&](int n, const std::function<Line()>& f) {
    try {
      report(n, f());
    } catch (const std::exception& e) {
      report(n, {false, fmt::format("error: {}", e.what())});
    }
  };
  for (const auto& [n, f] : plan)
    if (n < 7 && wanted(n)) guarded(n, f);
  if (wanted(7) || wanted(8) || wanted(9)) {
    try {
      DiscChecks d = disc_run();
      for (auto [n, l] : {std::pair{7, d.energy}, {8, d.profile}, {9, d.degree}})
        if (wanted(n)) report(n, l);
    } catch (const std::exception& e) {
      for (int n : {7, 8, 9})
        if (wanted(n)) report(n, {false, fmt::format("error: {}", e.what())});
    }
  }
  for (const auto& [n, f] : plan)
    if (n >= 10 && wanted(n)) guarded(n, f);

  std::set<int> failed;
  for (const auto& [n, l] : lines)
    if (!l.pass) failed.insert(n);
  std::set<int> expected_run;
  for (int n : expected)
    if (lines.count(n)) expected_run.insert(n);
  std::cout << fmt::format("{} of {} criteria pass", lines.size() - failed.size(), lines.size());
  if (!failed.empty()) {
    std::cout << "; failing:";
    for (int n : failed) std::cout << ' ' << n;
    if (failed == expected_run) std::cout << " (expected)";
  }
  std::cout << std::endl;
  return failed == expected_run ? 0 : 1;
}
