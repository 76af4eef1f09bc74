#include "glcorner/corner.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <fmt/format.h>

#include "glcorner/errors.hpp"

namespace glcorner {

namespace {
constexpr double pi = std::numbers::pi;
}

void CornerDomainSpec::validate() const {
  if (!(beta > 0) || !(beta < 2 * pi)) throw UsageError("beta must lie in (0, 2 pi)");
  if (!(L > 0) || !(ell > 0)) throw UsageError("L and ell must be positive");
  if (beta < pi && ell > std::tan(beta / 2) * L * (1 + 1e-12))
    throw UsageError(fmt::format("ell = {} exceeds tan(beta/2) L = {}", ell, std::tan(beta / 2) * L));
}

CornerMesh build_corner_mesh(const CornerDomainSpec& spec, double h) {
  spec.validate();
  if (!(h > 0)) throw UsageError("mesh spacing must be positive");
  const int nl = static_cast<int>(std::lround(spec.ell / h));
  if (nl < 10)
    throw UsageError(fmt::format("only {} layers across ell = {}; need at least 10 (use h <= {})", nl, spec.ell,
                                 spec.ell / 10));
  CornerMesh cm;
  cm.spec = spec;
  cm.layers = nl;
  cm.ht = spec.ell / nl;
  const int ns = std::max(1, static_cast<int>(std::lround(spec.L / h)));
  cm.hs = spec.L / ns;

  const double beta = spec.beta;
  const Vec2 e1{1, 0}, n1{0, 1};
  const Vec2 e2{std::cos(beta), std::sin(beta)}, n2{std::sin(beta), -std::cos(beta)};
  const bool wedge = beta > pi + 1e-12;
  const double c = (wedge || std::abs(beta - pi) < 1e-12) ? 0.0 : 1.0 / std::tan(beta / 2);

  Mesh2D& m = cm.mesh;
  std::vector<std::pair<int, int>> pairs;
  auto add = [&](Vec2 p, double s, double t, bool fixed) {
    m.nodes.push_back(p);
    m.bs.push_back(s);
    m.bt.push_back(t);
    m.tag.push_back(fixed ? NodeTag::Dirichlet : NodeTag::Interior);
    return m.num_nodes() - 1;
  };
  auto column = [&](int k) { return k == ns ? 0.0 : spec.L - k * cm.hs; };

  std::vector<std::vector<int>> rows;
  for (int j = 0; j <= nl; ++j) {
    const double t = j * cm.ht;
    const bool top = j == nl;
    std::vector<int> xs;  // column indices, x decreasing
    std::vector<int> row;
    std::vector<int> side2, side1;
    if (!wedge) {
      const double bx = c * t;
      for (int k = 0; k <= ns; ++k)
        if (column(k) >= bx + 0.3 * cm.hs) xs.push_back(k);
      for (int k : xs) side2.push_back(add(e2 * column(k) + n2 * t, -column(k), t, top || k == 0));
      int mid = add(e1 * bx + n1 * t, -bx, t, top || bx >= spec.L - 1e-12);
      for (auto it = xs.rbegin(); it != xs.rend(); ++it)
        side1.push_back(add(e1 * column(*it) + n1 * t, column(*it), t, top || *it == 0));
      row = side2;
      row.push_back(mid);
      row.insert(row.end(), side1.begin(), side1.end());
      pairs.emplace_back(mid, mid);
      for (size_t q = 0; q < side2.size(); ++q) pairs.emplace_back(side2[q], side1[side1.size() - 1 - q]);
    } else {
      const int last = (j == 0) ? ns - 1 : ns;  // at t = 0 the x = 0 columns are the vertex
      for (int k = 0; k <= last; ++k) xs.push_back(k);
      for (int k : xs) side2.push_back(add(e2 * column(k) + n2 * t, -column(k), t, top || k == 0));
      std::vector<int> arc;
      if (j == 0) {
        arc.push_back(add({0, 0}, 0.0, 0.0, false));
      } else {
        const int nw = std::max(1, static_cast<int>(std::ceil(t * (beta - pi) / h)));
        for (int q = 1; q < nw; ++q) {
          double phi = (beta - pi / 2) - (beta - pi) * q / nw;
          arc.push_back(add(Vec2{std::cos(phi), std::sin(phi)} * t, 0.0, t, top));
        }
      }
      for (auto it = xs.rbegin(); it != xs.rend(); ++it)
        side1.push_back(add(e1 * column(*it) + n1 * t, column(*it), t, top || *it == 0));
      row = side2;
      row.insert(row.end(), arc.begin(), arc.end());
      row.insert(row.end(), side1.begin(), side1.end());
      for (size_t q = 0; q < arc.size(); ++q) pairs.emplace_back(arc[q], arc[arc.size() - 1 - q]);
      for (size_t q = 0; q < side2.size(); ++q) pairs.emplace_back(side2[q], side1[side1.size() - 1 - q]);
    }
    rows.push_back(std::move(row));
  }
  for (int j = 0; j < nl; ++j) zip_chains(m.nodes, rows[j], rows[j + 1], false, m.tris);
  for (int j = 0; j <= nl; ++j) m.rows.push_back({rows[j], false, j * cm.ht});
  m.mirror.assign(m.nodes.size(), -1);
  for (auto [a, b] : pairs) {
    m.mirror[a] = b;
    m.mirror[b] = a;
  }
  m.corner_points.push_back({0, 0});
  m.finalize();
  return cm;
}

ComplexField2D psi_star_trace(const CornerMesh& cm, const Profile1D& f0, double alpha0) {
  const Mesh2D& m = cm.mesh;
  ComplexField2D psi(m.nodes.size());
  for (size_t i = 0; i < psi.size(); ++i) {
    double s = m.bs[i], t = m.bt[i];
    psi[i] = std::polar(f0(t), -alpha0 * s - 0.5 * s * t);
  }
  return psi;
}

CornerEnergyReport compute_corner_energy(const CornerDomainSpec& spec, double b, const CornerOptions& opt) {
  CornerMesh cm = build_corner_mesh(spec, opt.h);
  CornerEnergyReport rep;
  rep.spec = spec;
  rep.b = b;
  rep.h = opt.h;
  rep.nodes = cm.mesh.num_nodes();

  // half-line and strip problems on the same lattice as the arms
  OneDProblem half;
  half.b = b;
  half.h = cm.ht;
  half.T = cm.ht * std::ceil(15.0 / cm.ht - 1e-9);
  half.lattice_hs = cm.hs;
  OneDResult f0 = optimize_alpha(half);
  OneDProblem strip = half;
  strip.T = spec.ell;
  OneDResult fl = optimize_alpha(strip);
  rep.alpha0 = f0.alpha;
  rep.e1d_ell = fl.energy;

  GLParams p{1.0, b};
  SolveOptions so;
  so.tol = opt.tol;
  so.max_iter = 400000;
  so.record_history = false;
  so.progress = opt.progress;
  ComplexField2D trace = psi_star_trace(cm, f0.profile, f0.alpha);
  SolveReport ra = minimize(cm.mesh, p, trace, BoundaryMode::Dirichlet, so);
  rep.ansatz_energy = ra.energy;
  SolveReport best = std::move(ra);
  rep.winner = "ansatz";
  if (opt.random_start) {
    std::mt19937_64 rng(opt.seed);
    std::uniform_real_distribution<double> amp(0.0, 1.0), ph(0.0, 2 * pi);
    ComplexField2D init = trace;
    for (size_t i = 0; i < init.size(); ++i)
      if (cm.mesh.tag[i] != NodeTag::Dirichlet) init[i] = std::polar(amp(rng), ph(rng));
    try {
      SolveReport rb = minimize(cm.mesh, p, init, BoundaryMode::Dirichlet, so);
      rep.random_energy = rb.energy;
      rep.random_converged = true;
      if (rb.energy < best.energy) {
        best = std::move(rb);
        rep.winner = "random";
      }
    } catch (const NumericalError&) {
      rep.random_energy = std::numeric_limits<double>::quiet_NaN();
    }
  }
  rep.e2d = best.energy;
  rep.residual = best.residual;
  rep.iterations = best.iterations;
  rep.energy = rep.e2d - 2.0 * spec.L * rep.e1d_ell;
  rep.psi = std::move(best.psi);
  return rep;
}

CornerLimitReport corner_limit(const CornerLadder& ladder, const CornerOptions& opt,
                               const std::function<void(const CornerEnergyReport&)>& on_run) {
  auto t0 = std::chrono::steady_clock::now();
  CornerLimitReport out;
  out.ladder = ladder;
  std::vector<std::vector<double>> table;
  for (double L : ladder.Ls) {
    std::vector<double> row;
    for (double ell : ladder.ells) {
      CornerDomainSpec spec{ladder.beta, L, ell};
      if (ladder.beta < pi && ell > std::tan(ladder.beta / 2) * L * (1 + 1e-12)) {
        row.push_back(std::numeric_limits<double>::quiet_NaN());
        out.skipped.push_back({L, ell});
        continue;
      }
      CornerEnergyReport r = compute_corner_energy(spec, ladder.b, opt);
      r.psi.clear();
      row.push_back(r.energy);
      if (on_run) on_run(r);
      out.runs.push_back(std::move(r));
    }
    table.push_back(std::move(row));
  }
  out.limit = extrapolate_limit(ladder.Ls, ladder.ells, table);
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

ConjectureReport conjecture_check(double b, double ecorr, const std::vector<double>& betas,
                                  const std::vector<double>& energies, const std::vector<double>& errors) {
  if (betas.size() != energies.size() || betas.size() != errors.size())
    throw UsageError("conjecture_check: mismatched inputs");
  ConjectureReport rep;
  rep.b = b;
  rep.ecorr = ecorr;
  for (size_t i = 0; i < betas.size(); ++i) {
    ConjectureRow r;
    r.beta = betas[i];
    r.delta = pi - betas[i];
    r.energy = energies[i];
    r.error_bar = errors[i];
    r.predicted = -(pi - betas[i]) * ecorr;
    r.deviation = r.energy - r.predicted;
    if (std::abs(r.delta) > 1e-12) {
      r.ratio = std::abs(r.deviation) / std::pow(std::abs(r.delta), 4.0 / 3.0);
      rep.C = std::max(rep.C, r.ratio);
    }
    rep.rows.push_back(r);
  }
  return rep;
}

}  // namespace glcorner
