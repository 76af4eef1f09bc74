#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "glcorner/geometry.hpp"
#include "glcorner/oned.hpp"

namespace glcorner {

// Lowest eigenvalue of the discrete linear 1D operator -d/dt J d/dt + J V
// (mass J) at p.alpha, same discretization as the nonlinear problem.
double linear_ground_energy(const OneDProblem& p);
// alpha minimizing linear_ground_energy.
double theta0_alpha(OneDProblem p);

struct Theta0Result {
  double theta0 = 0.0;         // Richardson value from h and h/2
  double alpha = 0.0;          // minimizing alpha (fine grid)
  double coarse = 0.0, fine = 0.0;
  double error_estimate = 0.0; // |fine - coarse| / 3
  double h = 0.0, T = 0.0;
};

Theta0Result compute_theta0(double h = 0.02, double T = 15.0);

// Independent route: shooting for -u'' + (t + alpha)^2 u = lambda u, u'(0) = 0,
// bisecting lambda on whether u changes sign before t_max, then Brent over alpha.
struct ShootingResult {
  double theta0 = 0.0;
  double alpha = 0.0;
};
ShootingResult theta0_shooting(double t_max = 9.0, double tol = 1e-11);

struct SectorSpec {
  double beta = 0.0;
  double R = 40.0;   // truncation radius (Dirichlet on the arc)
  double h = 0.15;   // mesh spacing away from the vertex
  double tol = 1e-8; // eigen-residual tolerance
  double accuracy = 2e-3;  // target discretization error of mu
  bool estimate_truncation = true;
  void validate() const;
};

struct EigenResult {
  double value = 0.0;
  double residual = 0.0;
  double truncation_sensitivity = 0.0;  // |mu(R) - mu(R/2)|
  double discretization_estimate = 0.0;
  int nodes = 0;
  int iterations = 0;
  Eigen::VectorXcd vector;  // on free nodes of the sector mesh
};

// Ground state of the unit-field magnetic Neumann Laplacian on the sector of
// opening beta. Throws UsageError if the mesh is too coarse for spec.tol.
EigenResult compute_mu(const SectorSpec& spec);

struct CriticalFields {
  double eps = 0.0;
  double theta0 = 0.0;
  double hc2 = 0.0;     // 1 / eps^2
  double hstar = 0.0;   // 1 / (Theta0 eps^2)
  std::vector<double> betas, mus, corner_fields;  // sorted by field, ascending
};

// Ladder of fields for a polygon. `mu_of` supplies mu(beta); corner fields
// are clamped to H* when mu(beta) >= Theta0.
CriticalFields critical_fields(double eps, const CurvilinearPolygon& poly, double theta0,
                               const std::function<double(double)>& mu_of);

}  // namespace glcorner
