#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "glcorner/extrapolation.hpp"
#include "glcorner/gl2d.hpp"
#include "glcorner/mesh.hpp"
#include "glcorner/oned.hpp"

namespace glcorner {

// Truncated corner domain of opening beta: two half-strips of width ell and
// length L glued along the bisectrix (plus a disc wedge of radius ell when
// beta > pi). Blown-up units (eps = 1), vertex at the origin, side 1 along +x.
struct CornerDomainSpec {
  double beta = 0.0;
  double L = 8.0;
  double ell = 6.0;
  void validate() const;
};

struct CornerMesh {
  CornerDomainSpec spec;
  Mesh2D mesh;  // bs/bt hold the nearest-side coordinates (s signed, side 2 has s <= 0)
  double hs = 0.0, ht = 0.0;
  int layers = 0;  // number of t-intervals across ell
};

// Requires at least 10 layers across ell. For beta = pi the mesh is the
// regular split rectangle [-L, L] x [0, ell].
CornerMesh build_corner_mesh(const CornerDomainSpec& spec, double h);

// psi_star = f0(t) exp(-i alpha0 s - i s t / 2) at every node, with (s, t)
// the nearest-side coordinates (ties at the bisectrix go to side 2).
ComplexField2D psi_star_trace(const CornerMesh& cm, const Profile1D& f0, double alpha0);

struct CornerOptions {
  double h = 0.1;
  double tol = 1e-11;
  bool random_start = true;
  std::uint64_t seed = 7;
  std::function<void(int, double, double)> progress;
};

struct CornerEnergyReport {
  CornerDomainSpec spec;
  double b = 0.0, h = 0.0;
  double energy = 0.0;        // E_2D - 2 L E_1D(ell)
  double e2d = 0.0;
  double e1d_ell = 0.0;       // lattice-consistent strip energy per unit length
  double alpha0 = 0.0;
  double residual = 0.0;
  int iterations = 0;
  int nodes = 0;
  std::string winner;         // "ansatz" or "random"
  double ansatz_energy = 0.0, random_energy = 0.0;
  bool random_converged = false;
  ComplexField2D psi;
};

CornerEnergyReport compute_corner_energy(const CornerDomainSpec& spec, double b, const CornerOptions& opt = {});

struct CornerLadder {
  double beta = 0.0, b = 0.0;
  std::vector<double> Ls{8, 12, 16};
  std::vector<double> ells{6, 8, 10};
};

struct CornerLimitReport {
  CornerLadder ladder;
  LadderLimit limit;
  std::vector<CornerEnergyReport> runs;
  std::vector<std::pair<double, double>> skipped;  // infeasible (L, ell)
  double seconds = 0.0;
};

// Runs the (L, ell) ladder and extrapolates. ell values above tan(beta/2) L are skipped
// (reported as NaN) and make the row unusable.
CornerLimitReport corner_limit(const CornerLadder& ladder, const CornerOptions& opt = {},
                               const std::function<void(const CornerEnergyReport&)>& on_run = {});

struct ConjectureRow {
  double beta = 0.0, delta = 0.0;  // delta = pi - beta
  double energy = 0.0, error_bar = 0.0;
  double predicted = 0.0;          // -(pi - beta) E_corr
  double deviation = 0.0;          // energy - predicted
  double ratio = 0.0;              // |deviation| / |delta|^(4/3)
};

struct ConjectureReport {
  double b = 0.0, ecorr = 0.0;
  std::vector<ConjectureRow> rows;
  double C = 0.0;                  // max ratio over rows with delta != 0
};

ConjectureReport conjecture_check(double b, double ecorr, const std::vector<double>& betas,
                                  const std::vector<double>& energies, const std::vector<double>& errors);

}  // namespace glcorner
