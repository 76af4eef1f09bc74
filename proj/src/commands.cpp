#include "glcorner/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <set>
#include <thread>

#include <fmt/format.h>

#include "glcorner/corner.hpp"
#include "glcorner/errors.hpp"
#include "glcorner/snapshot.hpp"
#include "glcorner/spectral.hpp"
#include "glcorner/surface.hpp"
#include "glcorner/svg.hpp"

namespace glcorner {

namespace fs = std::filesystem;

namespace {

constexpr double pi = std::numbers::pi;

struct CommandInfo {
  std::string summary;
  std::vector<ParamDoc> params;
};

const Json kNull = nullptr;

const std::map<std::string, CommandInfo>& registry() {
  static const std::map<std::string, CommandInfo> reg = [] {
    std::map<std::string, CommandInfo> r;
    const std::vector<ParamDoc> shape{{"shape", "disc", "built-in domain: disc, square, stadium, pentagon"},
                                      {"polygon", kNull, "polygon JSON file (overrides shape)"}};
    const std::vector<ParamDoc> ladder{{"b", 1.5, "GL parameter"},
                                       {"h", 0.1, "corner mesh spacing (blown-up units)"},
                                       {"tol", 1e-11, "relative residual tolerance of the corner solves"},
                                       {"Ls", Json::array({8, 12, 16}), "ladder of arm lengths L"},
                                       {"ells", Json::array({6, 8, 10}), "ladder of layer widths ell"},
                                       {"random_start", true, "also solve from a random start and keep the lower"},
                                       {"seed", 7, "random-start seed"}};
    r["constants"] = {"surface constants Theta0, alpha0, E0, f0(0), E_corr at one b",
                      {{"b", 1.5, "GL parameter, surface regime 1 < b < 1/Theta0"},
                       {"h", 0.01, "1D grid spacing (error bars compare h and h/2)"},
                       {"T", 15.0, "1D truncation length"}}};
    r["oned"] = {"1D surface problem at fixed curvature, optionally at a fixed alpha",
                 {{"b", 1.5, "GL parameter"},
                  {"alpha", kNull, "fixed alpha (null: minimize over alpha)"},
                  {"eps", 0.0, "eps (curved problems need eps * k != 0)"},
                  {"k", 0.0, "boundary curvature"},
                  {"h", 0.01, "grid spacing"},
                  {"T", 15.0, "truncation length (curved: min(T, 0.5 / (eps |k|)))"},
                  {"profile", "", "write the profile CSV to this path"}}};
    r["theta0"] = {"de Gennes constant by two independent routes",
                   {{"h", 0.02, "finite-difference spacing (Richardson with h/2)"},
                    {"T", 15.0, "truncation length"},
                    {"t_max", 9.0, "shooting interval"}}};
    r["mu"] = {"ground energy mu(beta) of the magnetic Neumann Laplacian on a sector",
               {{"beta", kNull, "opening angle in radians"},
                {"beta_pi", kNull, "opening angle in units of pi (alternative to beta)"},
                {"R", 40.0, "truncation radius"},
                {"h", 0.15, "mesh spacing away from the vertex"},
                {"tol", 1e-8, "eigen residual tolerance"},
                {"accuracy", 2e-3, "target discretization error"},
                {"truncation", true, "also solve at R/2 to estimate the truncation sensitivity"}}};
    CommandInfo corner{"corner energy: a single (L, ell) cell or the extrapolated ladder limit",
                       {{"beta", kNull, "opening angle in radians"},
                        {"beta_pi", kNull, "opening angle in units of pi"},
                        {"L", kNull, "single-cell arm length (with ell)"},
                        {"ell", kNull, "single-cell layer width (with L)"}}};
    corner.params.insert(corner.params.end(), ladder.begin(), ladder.end());
    r["corner"] = corner;
    CommandInfo conj{"flat-angle test of E_corner(pi -+ delta) against -+ delta E_corr",
                     {{"deltas", Json::array({0.1, 0.2, 0.3}), "angle offsets delta"}}};
    conj.params.insert(conj.params.end(), ladder.begin(), ladder.end());
    r["conjecture"] = conj;
    CommandInfo solve{"fixed-field GL minimizer on a boundary-layer mesh with diagnostics", shape};
    solve.params.insert(solve.params.end(),
                        {{"eps", 0.04, "eps"},
                         {"b", 1.5, "GL parameter"},
                         {"h_s", 0.15, "tangential mesh spacing (units of eps)"},
                         {"h_t", 0.1, "normal mesh spacing (units of eps)"},
                         {"depth", 12.0, "layer depth (units of eps)"},
                         {"tol", 1e-6, "relative residual tolerance"},
                         {"max_iter", 50000, "iteration cap"},
                         {"random_start", true, "also solve from a random start and keep the lower"},
                         {"seed", 7, "random-start seed"},
                         {"degree", -1, "ansatz degree (-1: nearest predicted)"},
                         {"snapshot", "", "write a binary field snapshot to this path"},
                         {"svg", "", "write a |psi| heatmap to this path"}});
    r["solve2d"] = solve;
    CommandInfo assemble{"energy prediction from boundary, curvature and corner terms", shape};
    assemble.params.insert(assemble.params.end(),
                           {{"eps", 0.04, "eps"},
                            {"b", 1.5, "GL parameter"},
                            {"corner_h", 0.1, "corner mesh spacing used for the cached corner energies"},
                            {"compute_missing", false, "run missing corner ladders instead of failing"},
                            {"solve", false, "also run solve2d on the same domain"},
                            {"h_s", 0.15, "solve2d tangential spacing"},
                            {"h_t", 0.1, "solve2d normal spacing"}});
    r["assemble"] = assemble;
    CommandInfo fields{"critical-field ladder H_c2 <= H* <= corner fields", shape};
    fields.params.insert(fields.params.end(), {{"eps", 0.04, "eps"},
                                               {"R", 40.0, "sector truncation radius"},
                                               {"h", 0.15, "sector mesh spacing"},
                                               {"theta0_h", 0.02, "Theta0 grid spacing"}});
    r["fields"] = fields;
    return r;
  }();
  return reg;
}

const CommandInfo& info(const std::string& command) {
  auto it = registry().find(command);
  if (it == registry().end()) throw UsageError(fmt::format("unknown command '{}'", command));
  return it->second;
}

double num(const Json& p, const char* key) {
  const Json& v = p.at(key);
  if (!v.is_number()) throw UsageError(fmt::format("parameter '{}' must be a number", key));
  return v.get<double>();
}

int integer(const Json& p, const char* key) {
  const Json& v = p.at(key);
  if (!v.is_number_integer()) throw UsageError(fmt::format("parameter '{}' must be an integer", key));
  return v.get<int>();
}

bool flag(const Json& p, const char* key) {
  const Json& v = p.at(key);
  if (!v.is_boolean()) throw UsageError(fmt::format("parameter '{}' must be true or false", key));
  return v.get<bool>();
}

std::string text(const Json& p, const char* key) {
  const Json& v = p.at(key);
  if (v.is_null()) return "";
  if (!v.is_string()) throw UsageError(fmt::format("parameter '{}' must be a string", key));
  return v.get<std::string>();
}

std::vector<double> numbers(const Json& p, const char* key) {
  const Json& v = p.at(key);
  if (!v.is_array()) throw UsageError(fmt::format("parameter '{}' must be a list of numbers", key));
  std::vector<double> out;
  for (const Json& x : v) {
    if (!x.is_number()) throw UsageError(fmt::format("parameter '{}' must be a list of numbers", key));
    out.push_back(x.get<double>());
  }
  return out;
}

double angle(const Json& p) {
  bool has_b = !p.at("beta").is_null(), has_pi = !p.at("beta_pi").is_null();
  if (has_b == has_pi) throw UsageError("give exactly one of beta and beta_pi");
  return has_pi ? num(p, "beta_pi") * pi : num(p, "beta");
}

CurvilinearPolygon domain(const Json& p, std::map<std::string, std::string>& hashes) {
  std::string file = text(p, "polygon");
  if (!file.empty()) {
    hashes[file] = sha256_file(file);
    return load_polygon(file);
  }
  return builtin_shape(text(p, "shape"));
}

Json finite_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

std::string angle_key(double beta) { return fmt::format("{:.9f}", beta); }

void say(const CommandContext& ctx, const std::string& line) {
  if (ctx.log) ctx.log(line);
}

// ----------------------------------------------------------------- commands

Json cmd_constants(const Json& p, const CommandContext& ctx) {
  const double b = num(p, "b"), h = num(p, "h"), T = num(p, "T");
  Theta0Result th = compute_theta0();
  const double bmax = 1.0 / th.theta0;
  if (!(b > 1.0))
    throw UsageError(fmt::format("b = {} is outside the surface regime (1, {:.6f}) = (1, 1/Theta0)", b, bmax));
  Json r{{"b", b},           {"h", h},
         {"T", T},           {"theta0", th.theta0},
         {"theta0_error", th.error_estimate},
         {"b_max", bmax}};
  if (b >= bmax) {
    r.update({{"normal_regime", true},
              {"note", "normal regime: b >= 1/Theta0, the 1D minimizer vanishes"},
              {"alpha0", 0.0}, {"alpha0_error", 0.0}, {"E0", 0.0}, {"E0_error", 0.0},
              {"f0_at_0", 0.0}, {"f0_at_0_error", 0.0}, {"ecorr", 0.0}, {"ecorr_error", 0.0}});
    return r;
  }
  say(ctx, fmt::format("1D problem at b = {} (h = {} and {})", b, h, h / 2));
  SurfaceConstants c = compute_ecorr(b, h, T), c2 = compute_ecorr(b, h / 2, T);
  r.update({{"normal_regime", false},
            {"note", ""},
            {"alpha0", c2.alpha0},
            {"alpha0_error", std::abs(c2.alpha0 - c.alpha0)},
            {"E0", c2.E0},
            {"E0_error", std::abs(c2.E0 - c.E0)},
            {"f0_at_0", c2.f0_at_0},
            {"f0_at_0_error", std::abs(c2.f0_at_0 - c.f0_at_0)},
            {"ecorr", c2.ecorr},
            {"ecorr_error", std::abs(c2.ecorr - c.ecorr)}});
  return r;
}

Json cmd_oned(const Json& p, const CommandContext& ctx) {
  OneDProblem q;
  q.b = num(p, "b");
  q.h = num(p, "h");
  q.T = num(p, "T");
  q.eps = num(p, "eps");
  q.k = num(p, "k");
  if (!(q.b > 0)) throw UsageError("b must be positive");
  if (q.eps < 0) throw UsageError("eps must be non-negative");
  const bool curved = q.eps * q.k != 0.0;
  if (curved) q.T = std::min(q.T, 0.5 / (q.eps * std::abs(q.k)));
  Json r{{"b", q.b}, {"eps", q.eps}, {"k", q.k}, {"h", q.h}, {"T", q.T}};
  Profile1D prof;
  if (p.at("alpha").is_null()) {
    say(ctx, "minimizing over alpha");
    OneDResult o = optimize_alpha(q);
    prof = o.profile;
    r.update({{"alpha", o.alpha},
              {"alpha_fixed", false},
              {"energy", o.energy},
              {"residual", o.residual},
              {"moment", o.moment},
              {"norm2", o.norm2},
              {"trivial", o.trivial},
              {"warm_cold_agree", o.warm_cold_agree}});
  } else {
    q.alpha = num(p, "alpha");
    FlowReport f = minimize_profile(q);
    prof.problem = q;
    prof.t = grid_points(q);
    prof.f = f.f;
    r.update({{"alpha", q.alpha},
              {"alpha_fixed", true},
              {"energy", f.energy},
              {"residual", f.residual},
              {"moment", 0.5 * f1d_alpha_derivative(q, f.f)},
              {"trivial", std::all_of(f.f.begin(), f.f.end(), [](double v) { return v == 0.0; })}});
  }
  r["f_at_0"] = prof.f.empty() ? 0.0 : prof.f.front();
  if (curved) {
    SurfaceConstants c = compute_ecorr(q.b, q.h, num(p, "T"));
    r["E0"] = c.E0;
    r["ecorr"] = c.ecorr;
    r["expansion_residual"] = r["energy"].get<double>() - c.E0 + q.eps * q.k * c.ecorr;
  }
  std::string out = text(p, "profile");
  if (!out.empty()) {
    write_text(out, profile_csv(prof));
    r["profile_file"] = out;
  }
  return r;
}

Json cmd_theta0(const Json& p, const CommandContext& ctx) {
  say(ctx, "finite-difference eigenproblem");
  Theta0Result th = compute_theta0(num(p, "h"), num(p, "T"));
  say(ctx, "shooting");
  ShootingResult sh = theta0_shooting(num(p, "t_max"));
  return Json{{"theta0", th.theta0},         {"alpha", th.alpha},
              {"error_estimate", th.error_estimate}, {"coarse", th.coarse},
              {"fine", th.fine},             {"h", th.h},
              {"T", th.T},                   {"shooting_theta0", sh.theta0},
              {"shooting_alpha", sh.alpha},  {"routes_gap", std::abs(th.theta0 - sh.theta0)},
              {"surface_threshold_b", 1.0 / th.theta0}};
}

Json mu_json(const EigenResult& e, const SectorSpec& s) {
  return Json{{"beta", s.beta},
              {"beta_pi", s.beta / pi},
              {"mu", e.value},
              {"residual", e.residual},
              {"truncation_sensitivity", e.truncation_sensitivity},
              {"discretization_estimate", e.discretization_estimate},
              {"nodes", e.nodes},
              {"iterations", e.iterations},
              {"R", s.R},
              {"h", s.h}};
}

Json cached_mu(double beta, const Json& p, const CommandContext& ctx) {
  SectorSpec s;
  s.beta = beta;
  s.R = num(p, "R");
  s.h = num(p, "h");
  if (p.contains("tol")) s.tol = num(p, "tol");
  if (p.contains("accuracy")) s.accuracy = num(p, "accuracy");
  if (p.contains("truncation")) s.estimate_truncation = flag(p, "truncation");
  Json key_params{{"beta", angle_key(beta)}, {"truncation", s.estimate_truncation}};
  Json res{{"R", s.R}, {"h", s.h}, {"tol", s.tol}, {"accuracy", s.accuracy}};
  RecordCache cache(ctx.cache_dir);
  std::string key = cache_key("mu", key_params, res);
  if (ctx.use_cache)
    if (auto hit = cache.find(key)) return hit->result;
  say(ctx, fmt::format("sector eigenproblem at beta = {:.6f} pi", beta / pi));
  RunRecord rec;
  rec.command = "mu";
  rec.params = key_params;
  rec.params["resolution"] = res;
  rec.version = code_version();
  rec.started = utc_timestamp();
  rec.result = mu_json(compute_mu(s), s);
  rec.finished = utc_timestamp();
  if (ctx.use_cache) cache.store(key, rec);
  return rec.result;
}

Json cmd_mu(const Json& p, const CommandContext& ctx) { return cached_mu(angle(p), p, ctx); }

CornerLadder ladder_from(double beta, const Json& p) {
  CornerLadder lad;
  lad.beta = beta;
  lad.b = num(p, "b");
  lad.Ls = numbers(p, "Ls");
  lad.ells = numbers(p, "ells");
  return lad;
}

CornerOptions corner_options(const Json& p) {
  CornerOptions o;
  o.h = num(p, "h");
  o.tol = num(p, "tol");
  o.random_start = flag(p, "random_start");
  o.seed = static_cast<std::uint64_t>(integer(p, "seed"));
  return o;
}

Json run_json(const CornerEnergyReport& r) {
  return Json{{"L", r.spec.L},
              {"ell", r.spec.ell},
              {"energy", r.energy},
              {"e2d", r.e2d},
              {"e1d_ell", r.e1d_ell},
              {"alpha0", r.alpha0},
              {"residual", r.residual},
              {"iterations", r.iterations},
              {"nodes", r.nodes},
              {"winner", r.winner},
              {"ansatz_energy", r.ansatz_energy},
              {"random_energy", finite_or_null(r.random_energy)}};
}

Json ladder_json(const CornerLimitReport& rep) {
  const LadderLimit& l = rep.limit;
  Json table = Json::array();
  for (const auto& row : l.table) {
    Json jr = Json::array();
    for (double v : row) jr.push_back(finite_or_null(v));
    table.push_back(jr);
  }
  Json ell_limits = Json::array();
  for (const auto& s : l.ell_limits)
    ell_limits.push_back({{"limit", s.limit}, {"error", s.error}, {"plateau", s.plateau}, {"method", s.method}});
  Json runs = Json::array();
  for (const auto& r : rep.runs) runs.push_back(run_json(r));
  Json skipped = Json::array();
  for (auto [L, ell] : rep.skipped) skipped.push_back({{"L", L}, {"ell", ell}});
  const bool ok = l.plateau;
  return Json{{"mode", "ladder"},
              {"beta", rep.ladder.beta},
              {"beta_pi", rep.ladder.beta / pi},
              {"b", rep.ladder.b},
              {"Ls", l.Ls},
              {"ells", l.ells},
              {"table", table},
              {"ell_limits", ell_limits},
              {"L_diffs", l.L_limit.diffs},
              {"L_method", l.L_limit.method},
              {"extrapolated", l.limit},
              {"limit", ok ? Json(l.limit) : Json(nullptr)},
              {"error_bar", l.error_bar},
              {"relative_error", l.limit != 0.0 ? Json(l.error_bar / std::abs(l.limit)) : Json(nullptr)},
              {"ell_monotone", l.ell_monotone},
              {"L_monotone", l.L_monotone},
              {"plateau", l.plateau},
              {"status", ok ? "converged" : "not converged"},
              {"skipped", skipped},
              {"runs", runs},
              {"seconds", rep.seconds}};
}

struct LadderKey {
  Json params, resolution;
  std::string key;
};

LadderKey ladder_key(double beta, const CornerLadder& lad, const CornerOptions& opt) {
  LadderKey k;
  k.params = Json{{"beta", angle_key(beta)}, {"b", lad.b}, {"Ls", lad.Ls}, {"ells", lad.ells},
                  {"random_start", opt.random_start}, {"seed", opt.seed}};
  k.resolution = Json{{"h", opt.h}, {"tol", opt.tol}};
  k.key = cache_key("corner-ladder", k.params, k.resolution);
  return k;
}

Json cached_ladder(double beta, const Json& p, const CommandContext& ctx) {
  CornerLadder lad = ladder_from(beta, p);
  CornerOptions opt = corner_options(p);
  LadderKey lk = ladder_key(beta, lad, opt);
  Json key_params = lk.params, res = lk.resolution;
  RecordCache cache(ctx.cache_dir);
  const std::string& key = lk.key;
  if (ctx.use_cache)
    if (auto hit = cache.find(key)) {
      say(ctx, fmt::format("corner ladder at beta = {:.6f} pi from cache", beta / pi));
      return hit->result;
    }
  RunRecord rec;
  rec.command = "corner-ladder";
  rec.params = key_params;
  rec.params["resolution"] = res;
  rec.version = code_version();
  rec.started = utc_timestamp();
  CornerLimitReport rep = corner_limit(lad, opt, [&](const CornerEnergyReport& r) {
    say(ctx, fmt::format("  beta = {:.6f} pi  L = {:g}  ell = {:g}  E = {:.10f}  ({})", beta / pi, r.spec.L,
                         r.spec.ell, r.energy, r.winner));
  });
  rec.result = ladder_json(rep);
  rec.finished = utc_timestamp();
  if (ctx.use_cache) cache.store(key, rec);
  return rec.result;
}

bool ladder_cached(double beta, const Json& p, const CommandContext& ctx) {
  LadderKey lk = ladder_key(beta, ladder_from(beta, p), corner_options(p));
  return RecordCache(ctx.cache_dir).find(lk.key).has_value();
}

Json cmd_corner(const Json& p, const CommandContext& ctx) {
  const double beta = angle(p);
  const bool single = !p.at("L").is_null() || !p.at("ell").is_null();
  if (!single) return cached_ladder(beta, p, ctx);
  if (p.at("L").is_null() || p.at("ell").is_null()) throw UsageError("a single corner cell needs both L and ell");
  CornerDomainSpec spec{beta, num(p, "L"), num(p, "ell")};
  say(ctx, fmt::format("corner cell beta = {:.6f} pi, L = {}, ell = {}", beta / pi, spec.L, spec.ell));
  CornerEnergyReport r = compute_corner_energy(spec, num(p, "b"), corner_options(p));
  Json j = run_json(r);
  j.update({{"mode", "cell"}, {"beta", beta}, {"beta_pi", beta / pi}, {"b", r.b}, {"h", r.h}});
  return j;
}

Json cmd_conjecture(const Json& p, const CommandContext& ctx) {
  const double b = num(p, "b");
  std::vector<double> deltas = numbers(p, "deltas");
  if (deltas.empty()) throw UsageError("conjecture needs at least one delta");
  for (double d : deltas)
    if (!(d > 0 && d < pi)) throw UsageError("deltas must lie in (0, pi)");
  SurfaceConstants c = compute_ecorr(b);
  std::vector<double> betas, energies, errors;
  Json ladders = Json::array();
  auto add = [&](double beta) {
    Json lad = cached_ladder(beta, p, ctx);
    betas.push_back(beta);
    energies.push_back(lad.at("extrapolated").get<double>());
    errors.push_back(lad.at("error_bar").get<double>());
    ladders.push_back({{"beta", beta},
                       {"limit", lad.at("limit")},
                       {"extrapolated", lad.at("extrapolated")},
                       {"error_bar", lad.at("error_bar")},
                       {"status", lad.at("status")}});
  };
  add(pi);
  for (double d : deltas) {
    add(pi - d);
    add(pi + d);
  }
  ConjectureReport rep = conjecture_check(b, c.ecorr, betas, energies, errors);
  Json rows = Json::array();
  for (const auto& r : rep.rows)
    rows.push_back({{"beta", r.beta},
                    {"delta", r.delta},
                    {"energy", r.energy},
                    {"error_bar", r.error_bar},
                    {"predicted", r.predicted},
                    {"deviation", r.deviation},
                    {"ratio", r.ratio}});
  // least-squares exponent of |deviation| against |delta|
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (const auto& r : rep.rows)
    if (std::abs(r.delta) > 1e-12 && r.deviation != 0.0) {
      double x = std::log(std::abs(r.delta)), y = std::log(std::abs(r.deviation));
      sx += x, sy += y, sxx += x * x, sxy += x * y;
      ++n;
    }
  Json exponent = nullptr;
  if (n >= 2 && n * sxx - sx * sx > 0) exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return Json{{"b", b},
              {"ecorr", c.ecorr},
              {"rows", rows},
              {"C", rep.C},
              {"deviation_exponent", exponent},
              {"flat_energy", energies.front()},
              {"ladders", ladders}};
}

Json agmon_json(const AgmonReport& a) {
  return Json{{"d", a.d}, {"mass", a.mass}, {"rate", a.rate}, {"no_mass", a.no_mass}};
}

Json cmd_solve2d(const Json& p, const CommandContext& ctx, std::map<std::string, std::string>& hashes) {
  CurvilinearPolygon poly = domain(p, hashes);
  SurfaceRunOptions o;
  o.eps = num(p, "eps");
  o.b = num(p, "b");
  o.mesh.h_s = num(p, "h_s");
  o.mesh.h_t = num(p, "h_t");
  o.mesh.depth = num(p, "depth");
  o.tol = num(p, "tol");
  o.max_iter = integer(p, "max_iter");
  o.random_start = flag(p, "random_start");
  o.seed = static_cast<std::uint64_t>(integer(p, "seed"));
  o.degree = integer(p, "degree");
  if (ctx.log)
    o.progress = [&](int it, double e, double r) {
      say(ctx, fmt::format("  iteration {:6d}  energy {:.10f}  residual {:.2e}", it, e, r));
    };
  say(ctx, fmt::format("solving on '{}' at eps = {}, b = {}", poly.name(), o.eps, o.b));
  SurfaceRun run = solve_surface(poly, o);
  double mx = 0.0;
  for (const auto& z : run.report.psi) mx = std::max(mx, std::abs(z));
  const double boundary_term = std::abs(poly.perimeter() * run.sc.alpha0 / (2 * pi * o.eps));
  Json r{{"shape", poly.name()},
         {"eps", o.eps},
         {"b", o.b},
         {"nodes", run.mesh.num_nodes()},
         {"energy", run.report.energy},
         {"predicted_energy", run.predicted_energy},
         {"relative_gap", (run.report.energy - run.predicted_energy) / std::abs(run.predicted_energy)},
         {"corners", poly.corners().size()},
         {"winner", run.winner},
         {"ansatz_energy", run.ansatz_energy},
         {"random_energy", finite_or_null(run.random_energy)},
         {"residual", run.report.residual},
         {"iterations", run.report.iterations},
         {"rejected_steps", run.report.rejected_steps},
         {"ansatz_degree", run.ansatz_degree},
         {"winding", run.winding_ok ? Json(run.winding) : Json(nullptr)},
         {"predicted_degree", run.predicted_degree},
         {"degree_gap", run.winding_ok ? Json(std::abs(std::abs(run.winding) - run.predicted_degree)) : Json(nullptr)},
         {"degree_boundary_term", boundary_term},
         {"profile_deviation", run.deviation},
         {"agmon", agmon_json(run.agmon)},
         {"mass_beyond_6eps", run.agmon.mass[5]},
         {"max_abs_psi", mx},
         {"seconds", run.seconds}};
  std::string snap = text(p, "snapshot"), svg = text(p, "svg");
  if (!snap.empty()) {
    write_snapshot(snap, run.mesh, run.report.psi,
                   Json{{"shape", poly.name()}, {"eps", o.eps}, {"b", o.b}, {"energy", run.report.energy}});
    r["snapshot_file"] = snap;
  }
  if (!svg.empty()) {
    std::vector<double> mod(run.report.psi.size());
    for (size_t i = 0; i < mod.size(); ++i) mod[i] = std::abs(run.report.psi[i]);
    write_text(svg, svg_heatmap(run.mesh.nodes, run.mesh.tris, mod,
                                fmt::format("|psi| on {} (eps = {}, b = {})", poly.name(), o.eps, o.b)));
    r["svg_file"] = svg;
  }
  return r;
}

Json cmd_assemble(const Json& p, const CommandContext& ctx, std::map<std::string, std::string>& hashes) {
  CurvilinearPolygon poly = domain(p, hashes);
  const double eps = num(p, "eps"), b = num(p, "b");
  if (!(eps > 0)) throw UsageError("eps must be positive");
  SurfaceConstants c = compute_ecorr(b);
  Json lad_params = merge_params("corner", Json::object(), Json::object());
  lad_params["b"] = b;
  lad_params["h"] = num(p, "corner_h");
  std::set<std::string> distinct;
  std::vector<double> uniq;
  for (const auto& cn : poly.corners())
    if (distinct.insert(angle_key(cn.beta)).second) uniq.push_back(cn.beta);
  std::vector<std::string> missing;
  for (double beta : uniq)
    if (!ladder_cached(beta, lad_params, ctx))
      missing.push_back(fmt::format("glcorner corner --beta {:.17g} --b {} --h {}", beta, b, num(p, "corner_h")));
  if (!missing.empty() && !flag(p, "compute_missing"))
    throw UsageError("corner energies are not cached; run:\n  " + fmt::format("{}", fmt::join(missing, "\n  ")) +
                     "\nor pass --compute-missing true");
  std::map<std::string, Json> limits;
  for (double beta : uniq) limits[angle_key(beta)] = cached_ladder(beta, lad_params, ctx);
  const double kint = curvature_integral(poly);
  const double boundary = poly.perimeter() * c.E0 / eps;
  const double curvature = -c.ecorr * kint;
  double corner_sum = 0.0, corner_err = 0.0;
  bool all_converged = true;
  Json corners = Json::array();
  for (const auto& cn : poly.corners()) {
    const Json& l = limits.at(angle_key(cn.beta));
    double e = l.at("extrapolated").get<double>();
    corner_sum += e;
    corner_err += l.at("error_bar").get<double>();
    all_converged = all_converged && l.at("plateau").get<bool>();
    corners.push_back({{"beta", cn.beta}, {"beta_pi", cn.beta / pi}, {"energy", e},
                       {"error_bar", l.at("error_bar")}, {"status", l.at("status")}});
  }
  Json r{{"shape", poly.name()},
         {"eps", eps},
         {"b", b},
         {"perimeter", poly.perimeter()},
         {"curvature_integral", kint},
         {"boundary_term", boundary},
         {"curvature_term", curvature},
         {"corner_term", corner_sum},
         {"corner_error", corner_err},
         {"corners", corners},
         {"corners_converged", all_converged},
         {"prediction", boundary + curvature + corner_sum}};
  if (flag(p, "solve")) {
    Json sp = merge_params("solve2d", Json::object(),
                           {{"shape", p.at("shape")}, {"polygon", p.at("polygon")}, {"eps", eps}, {"b", b},
                            {"h_s", p.at("h_s")}, {"h_t", p.at("h_t")}});
    Json s = cmd_solve2d(sp, ctx, hashes);
    r["solve"] = s;
    r["solve_relative_gap"] = (s.at("energy").get<double>() - r["prediction"].get<double>()) /
                              std::abs(r["prediction"].get<double>());
  }
  return r;
}

Json cmd_fields(const Json& p, const CommandContext& ctx, std::map<std::string, std::string>& hashes) {
  CurvilinearPolygon poly = domain(p, hashes);
  const double eps = num(p, "eps");
  Theta0Result th = compute_theta0(num(p, "theta0_h"));
  Json mu_params{{"R", p.at("R")}, {"h", p.at("h")}};
  std::map<std::string, double> mus;
  CriticalFields cf = critical_fields(eps, poly, th.theta0, [&](double beta) {
    auto key = angle_key(beta);
    if (!mus.count(key)) mus[key] = cached_mu(beta, mu_params, ctx).at("mu").get<double>();
    return mus[key];
  });
  Json corners = Json::array();
  for (size_t i = 0; i < cf.betas.size(); ++i)
    corners.push_back({{"beta", cf.betas[i]},
                       {"beta_pi", cf.betas[i] / pi},
                       {"mu", cf.mus[i]},
                       {"clamped", cf.mus[i] >= th.theta0},
                       {"field", cf.corner_fields[i]}});
  double hc3 = cf.corner_fields.empty() ? cf.hstar : cf.corner_fields.back();
  return Json{{"shape", poly.name()}, {"eps", eps}, {"theta0", th.theta0}, {"hc2", cf.hc2},
              {"hstar", cf.hstar},    {"corners", corners}, {"hc3", hc3}};
}

Json dispatch(const std::string& command, const Json& p, const CommandContext& ctx,
              std::map<std::string, std::string>& hashes) {
  if (command == "constants") return cmd_constants(p, ctx);
  if (command == "oned") return cmd_oned(p, ctx);
  if (command == "theta0") return cmd_theta0(p, ctx);
  if (command == "mu") return cmd_mu(p, ctx);
  if (command == "corner") return cmd_corner(p, ctx);
  if (command == "conjecture") return cmd_conjecture(p, ctx);
  if (command == "solve2d") return cmd_solve2d(p, ctx, hashes);
  if (command == "assemble") return cmd_assemble(p, ctx, hashes);
  if (command == "fields") return cmd_fields(p, ctx, hashes);
  throw UsageError(fmt::format("unknown command '{}'", command));
}

// ------------------------------------------------------------------- sweeps

std::vector<Json> grid_cells(const Json& grid) {
  if (!grid.is_object()) throw UsageError("sweep grid must be an object of parameter lists");
  std::vector<Json> cells{Json::object()};
  for (const auto& [key, values] : grid.items()) {
    if (!values.is_array()) throw UsageError(fmt::format("sweep grid entry '{}' must be a list", key));
    std::vector<Json> next;
    for (const Json& c : cells)
      for (const Json& v : values) {
        Json cc = c;
        cc[key] = v;
        next.push_back(cc);
      }
    cells = std::move(next);
  }
  if (grid.empty() || cells.empty()) throw UsageError("no cells");
  return cells;
}

std::string csv_cell(const Json& v) {
  if (v.is_string()) {
    std::string s = v.get<std::string>();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    return q + "\"";
  }
  if (v.is_null()) return "";
  if (v.is_number_float()) return fmt::format("{:.17g}", v.get<double>());
  return v.dump();
}

bool scalar(const Json& v) { return v.is_number() || v.is_boolean() || v.is_string() || v.is_null(); }

std::string summary_plot(const std::string& command, const Json& grid, const std::vector<Json>& cells,
                         const std::vector<Json>& results) {
  auto column = [&](const std::vector<Json>& rows, const std::string& key) {
    std::vector<double> v;
    for (const Json& r : rows) {
      const Json* x = r.is_object() && r.contains(key) ? &r.at(key) : nullptr;
      v.push_back(x && x->is_number() ? x->get<double>() : NAN);
    }
    return v;
  };
  if (command == "mu") {
    std::vector<double> x = column(results, "beta_pi"), y = column(results, "mu");
    Theta0Result th = compute_theta0();
    std::vector<std::size_t> ord(x.size());
    for (size_t i = 0; i < ord.size(); ++i) ord[i] = i;
    std::sort(ord.begin(), ord.end(), [&](size_t a, size_t b) { return x[a] < x[b]; });
    Series s{"mu(beta)", {}, {}};
    for (size_t i : ord) s.x.push_back(x[i]), s.y.push_back(y[i]);
    Series t{"Theta0", {s.x.front(), s.x.back()}, {th.theta0, th.theta0}, false, true};
    return svg_lines({s, t}, {"sector ground energy", "beta / pi", "mu", false, false, {}});
  }
  if (command == "corner") {
    std::vector<double> beta = column(results, "beta"), e = column(results, "extrapolated");
    double b = results.front().value("b", 1.5);
    SurfaceConstants c = compute_ecorr(b);
    std::vector<size_t> ord(beta.size());
    for (size_t i = 0; i < ord.size(); ++i) ord[i] = i;
    std::sort(ord.begin(), ord.end(), [&](size_t a, size_t q) { return beta[a] > beta[q]; });
    Series s{"E_corner limit", {}, {}}, line{"-(pi - beta) E_corr", {}, {}, false, true};
    for (size_t i : ord) {
      s.x.push_back(pi - beta[i]);
      s.y.push_back(e[i]);
      line.x.push_back(pi - beta[i]);
      line.y.push_back(-(pi - beta[i]) * c.ecorr);
    }
    return svg_lines({s, line}, {"corner energy against pi - beta", "pi - beta", "E_corner", false, false,
                                 {fmt::format("b = {}, E_corr = {:.6f}", b, c.ecorr)}});
  }
  if (command == "oned" && grid.contains("eps")) {
    std::vector<double> eps = column(results, "eps"), res = column(results, "expansion_residual");
    Series s{"|E_k - E_0 + eps k E_corr|", {}, {}};
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (size_t i = 0; i < eps.size(); ++i)
      if (std::isfinite(res[i]) && res[i] != 0.0 && eps[i] > 0) {
        s.x.push_back(eps[i]);
        s.y.push_back(std::abs(res[i]));
        double lx = std::log(eps[i]), ly = std::log(std::abs(res[i]));
        sx += lx, sy += ly, sxx += lx * lx, sxy += lx * ly;
        ++n;
      }
    std::vector<std::string> notes;
    if (n >= 2) notes.push_back(fmt::format("fitted slope {:.3f}", (n * sxy - sx * sy) / (n * sxx - sx * sx)));
    return svg_lines({s}, {"curvature expansion residual", "eps", "|residual|", true, true, notes});
  }
  // generic: first numeric grid parameter against the first numeric result entry
  for (const auto& [gk, gv] : grid.items()) {
    if (gv.empty() || !gv.front().is_number()) continue;
    for (const auto& [rk, rv] : results.front().items()) {
      if (!rv.is_number()) continue;
      Series s{rk, column(cells, gk), column(results, rk)};
      return svg_lines({s}, {fmt::format("{} sweep", command), gk, rk, false, false, {}});
    }
  }
  return "";
}

}  // namespace

std::vector<std::string> command_names() {
  std::vector<std::string> out;
  for (const auto& [k, v] : registry()) out.push_back(k);
  out.push_back("sweep");
  return out;
}

std::string command_summary(const std::string& command) {
  if (command == "sweep") return "run a parameter grid of one command and write a result bundle";
  return info(command).summary;
}

const std::vector<ParamDoc>& command_params(const std::string& command) {
  static const std::vector<ParamDoc> sweep{{"spec", kNull, "sweep file (JSON)"}};
  if (command == "sweep") return sweep;
  return info(command).params;
}

Json merge_params(const std::string& command, const Json& config, const Json& overrides) {
  const auto& docs = command_params(command);
  Json out = Json::object();
  for (const auto& d : docs) out[d.name] = d.value;
  for (const Json* src : {&config, &overrides}) {
    if (src->is_null()) continue;
    if (!src->is_object()) throw UsageError("parameters must be a JSON object");
    for (const auto& [k, v] : src->items()) {
      if (!out.contains(k)) {
        std::vector<std::string> names;
        for (const auto& d : docs) names.push_back(d.name);
        throw UsageError(fmt::format("unknown parameter '{}' for {}; known: {}", k, command, fmt::join(names, ", ")));
      }
      out[k] = v;
    }
  }
  return out;
}

RunRecord run_command(const std::string& command, const Json& params, const CommandContext& ctx) {
  if (command == "sweep") throw UsageError("use run_sweep for sweeps");
  RunRecord rec;
  rec.command = command;
  rec.params = params;
  rec.version = code_version();
  rec.started = utc_timestamp();
  rec.result = dispatch(command, params, ctx, rec.input_hashes);
  rec.finished = utc_timestamp();
  return rec;
}

std::string format_result(const RunRecord& rec) {
  std::string out = fmt::format("{} (glcorner {})\n", rec.command, rec.version);
  size_t w = 0;
  for (const auto& [k, v] : rec.result.items())
    if (scalar(v)) w = std::max(w, k.size());
  for (const auto& [k, v] : rec.result.items()) {
    if (!scalar(v)) continue;
    std::string val = v.is_number_float() ? fmt::format("{:.10g}", v.get<double>())
                      : v.is_string()     ? v.get<std::string>()
                                          : v.dump();
    out += fmt::format("  {:<{}}  {}\n", k, w, val);
  }
  return out;
}

SweepSummary run_sweep(const Json& spec, const CommandContext& ctx) {
  if (!spec.is_object()) throw UsageError("sweep file must hold a JSON object");
  for (const auto& [k, v] : spec.items())
    if (k != "command" && k != "base" && k != "grid" && k != "output" && k != "workers")
      throw UsageError(fmt::format("unknown sweep key '{}'", k));
  if (!spec.contains("command") || !spec.at("command").is_string()) throw UsageError("sweep needs a command");
  const std::string command = spec.at("command").get<std::string>();
  if (command == "sweep") throw UsageError("sweeps cannot nest");
  info(command);
  const Json base = spec.value("base", Json::object());
  const Json grid = spec.value("grid", Json::object());
  std::vector<Json> cells = grid_cells(grid);
  SweepSummary sum;
  sum.output = spec.value("output", std::string("sweep-out"));
  sum.cells = static_cast<int>(cells.size());
  std::vector<Json> params(cells.size());
  for (size_t i = 0; i < cells.size(); ++i) params[i] = merge_params(command, base, cells[i]);

  std::vector<Json> results(cells.size());
  std::vector<std::string> errors(cells.size());
  std::vector<RunRecord> records(cells.size());
  int workers = spec.value("workers", 0);
  if (workers <= 0) workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  workers = std::min<int>(workers, static_cast<int>(cells.size()));
  std::atomic<size_t> next{0};
  std::mutex log_mutex;
  CommandContext cell_ctx = ctx;
  if (ctx.log)
    cell_ctx.log = [&](const std::string& line) {
      std::lock_guard<std::mutex> lock(log_mutex);
      ctx.log(line);
    };
  auto work = [&] {
    for (size_t i = next++; i < cells.size(); i = next++) {
      try {
        records[i] = run_command(command, params[i], cell_ctx);
        results[i] = records[i].result;
      } catch (const std::exception& e) {
        errors[i] = e.what();
        records[i].command = command;
        records[i].params = params[i];
        records[i].version = code_version();
        records[i].started = records[i].finished = utc_timestamp();
        records[i].result = Json{{"error", e.what()}};
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();

  fs::create_directories(sum.output / "cells");
  for (size_t i = 0; i < cells.size(); ++i) {
    write_text(sum.output / "cells" / fmt::format("cell_{:03d}.json", i), records[i].to_json().dump(2) + "\n");
    if (!errors[i].empty()) ++sum.failed;
  }
  // merged CSV: grid parameters, then the union of scalar result keys
  std::vector<std::string> gkeys, rkeys;
  for (const auto& [k, v] : grid.items()) gkeys.push_back(k);
  std::set<std::string> seen;
  for (const Json& r : results)
    if (r.is_object())
      for (const auto& [k, v] : r.items())
        if (scalar(v) && seen.insert(k).second) rkeys.push_back(k);
  std::string csv = "cell";
  for (const auto& k : gkeys) csv += "," + k;
  for (const auto& k : rkeys) csv += "," + k;
  csv += ",error\n";
  for (size_t i = 0; i < cells.size(); ++i) {
    csv += std::to_string(i);
    for (const auto& k : gkeys) csv += "," + csv_cell(cells[i].at(k));
    for (const auto& k : rkeys)
      csv += "," + (results[i].is_object() && results[i].contains(k) ? csv_cell(results[i].at(k)) : std::string());
    csv += "," + csv_cell(Json(errors[i])) + "\n";
  }
  write_text(sum.output / "results.csv", csv);
  std::vector<Json> ok_cells, ok_results;
  for (size_t i = 0; i < cells.size(); ++i)
    if (errors[i].empty()) ok_cells.push_back(cells[i]), ok_results.push_back(results[i]);
  std::string plot;
  if (!ok_results.empty()) {
    try {
      plot = summary_plot(command, grid, ok_cells, ok_results);
    } catch (const UsageError&) {
      plot.clear();
    }
  }
  if (!plot.empty()) write_text(sum.output / "summary.svg", plot);
  sum.complete = sum.failed == 0;
  Json failures = Json::array();
  for (size_t i = 0; i < cells.size(); ++i)
    if (!errors[i].empty()) failures.push_back({{"cell", i}, {"error", errors[i]}});
  Json bundle{{"command", command},
              {"version", code_version()},
              {"created", utc_timestamp()},
              {"cells", sum.cells},
              {"failed", sum.failed},
              {"status", sum.complete ? "complete" : "incomplete"},
              {"failures", failures},
              {"grid", grid},
              {"base", base},
              {"files", {{"csv", "results.csv"}, {"plot", plot.empty() ? Json(nullptr) : Json("summary.svg")}}}};
  write_text(sum.output / "bundle.json", bundle.dump(2) + "\n");
  return sum;
}

}  // namespace glcorner
