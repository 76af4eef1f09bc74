#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "glcorner/diagnostics.hpp"

namespace glcorner {

struct SurfaceRunOptions {
  double eps = 0.04;
  double b = 1.5;
  LayerMeshOptions mesh;
  double tol = 1e-6;
  int max_iter = 50000;
  bool random_start = true;
  std::uint64_t seed = 7;
  int degree = -1;  // ansatz degree; -1 rounds the predicted degree
  std::function<void(int, double, double)> progress;
};

struct SurfaceRun {
  Mesh2D mesh;
  SurfaceConstants sc;
  SolveReport report;           // accepted (lowest-energy) run
  std::string winner;           // "ansatz" or "random"
  double ansatz_energy = 0.0;
  double random_energy = 0.0;   // NaN when skipped or not converged
  int ansatz_degree = 0;
  double predicted_energy = 0.0;  // |dOmega| E0 / eps - E_corr int k
  double predicted_degree = 0.0;
  int winding = 0;
  bool winding_ok = false;      // false when psi vanishes on the eps-offset contour
  double deviation = 0.0;       // surface_profile_deviation
  AgmonReport agmon;
  double seconds = 0.0;
};

// Fixed-field minimizer on the boundary-layer mesh of `poly` (innermost row
// held at zero), best of the tubular ansatz and an optional random start.
SurfaceRun solve_surface(const CurvilinearPolygon& poly, const SurfaceRunOptions& opt);

}  // namespace glcorner
