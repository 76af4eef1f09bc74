#pragma once

#include <cstdint>

#include "glcorner/gl2d.hpp"
#include "glcorner/mesh.hpp"

namespace glcorner::testing {

// Small meshes for property checks.
Mesh2D small_disc_mesh(double eps = 0.2);
Mesh2D flat_rectangle_mesh(double h, double L = 4.0, double ell = 4.0);

ComplexField2D random_field(int n, std::uint64_t seed, double amplitude = 1.0);

// max |E(psi) - E(psi e^{i phi})| / |E| over `trials` random phases (gauge-transformed links).
double gauge_defect(const Mesh2D& mesh, double eps, int trials, std::uint64_t seed);
// max over triangles |sum of oriented edge fluxes - area|.
double curl_defect(const Mesh2D& mesh);

struct DescentCheck {
  int accepted = 0;
  double max_change = 0.0;  // largest E_{k+1} - E_k, must be <= 0
  double max_modulus = 0.0;
  double energy = 0.0;
  bool converged = false;
};
DescentCheck descent_check(const Mesh2D& mesh, double eps, double b, std::uint64_t seed);

// Observed order from energies of a smooth input at h, h/2, h/4.
double order_1d(double h);
double order_2d(double h);

}  // namespace glcorner::testing
