#include "glcorner/surface.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "glcorner/errors.hpp"

namespace glcorner {

SurfaceRun solve_surface(const CurvilinearPolygon& poly, const SurfaceRunOptions& opt) {
  auto t0 = std::chrono::steady_clock::now();
  GLParams p{opt.eps, opt.b};
  p.validate();
  SurfaceRun run;
  run.sc = compute_ecorr(opt.b);
  run.mesh = build_layer_mesh(poly, opt.eps, opt.mesh);
  const Mesh2D& mesh = run.mesh;
  run.predicted_energy = poly.perimeter() * run.sc.E0 / opt.eps - run.sc.ecorr * curvature_integral(poly);
  run.predicted_degree = predicted_degree(poly, opt.eps, run.sc.alpha0);

  SolveOptions so;
  so.tol = opt.tol;
  so.max_iter = opt.max_iter;
  so.progress = opt.progress;
  auto zero_fixed = [&](ComplexField2D& psi) {
    for (size_t i = 0; i < psi.size(); ++i)
      if (mesh.tag[i] == NodeTag::Dirichlet) psi[i] = 0.0;
  };

  Ansatz an = tubular_ansatz(mesh, poly, opt.eps, run.sc.profile, run.sc.alpha0, opt.degree);
  run.ansatz_degree = an.degree;
  zero_fixed(an.psi);
  run.report = minimize(mesh, p, std::move(an.psi), BoundaryMode::Dirichlet, so);
  run.ansatz_energy = run.report.energy;
  run.winner = "ansatz";
  run.random_energy = std::numeric_limits<double>::quiet_NaN();
  if (opt.random_start) {
    std::mt19937_64 rng(opt.seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    ComplexField2D init(mesh.nodes.size());
    for (auto& z : init) z = std::polar(u(rng), 2 * std::numbers::pi * u(rng));
    zero_fixed(init);
    try {
      SolveReport rr = minimize(mesh, p, std::move(init), BoundaryMode::Dirichlet, so);
      run.random_energy = rr.energy;
      if (rr.energy < run.report.energy) {
        run.report = std::move(rr);
        run.winner = "random";
      }
    } catch (const NumericalError&) {
    }
  }

  const ComplexField2D& psi = run.report.psi;
  try {
    run.winding = winding_number(mesh, psi, opt.eps);
    run.winding_ok = true;
  } catch (const NumericalError&) {
  }
  run.deviation = surface_profile_deviation(mesh, psi, opt.eps, run.sc.profile);
  run.agmon = agmon_profile(mesh, psi, opt.eps);
  run.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return run;
}

}  // namespace glcorner
