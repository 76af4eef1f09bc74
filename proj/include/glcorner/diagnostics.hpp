#pragma once

#include <array>
#include <string>
#include <vector>

#include "glcorner/geometry.hpp"
#include "glcorner/gl2d.hpp"
#include "glcorner/mesh.hpp"
#include "glcorner/oned.hpp"

namespace glcorner {

// Predicted |winding| of a surface state: |Omega| / (2 pi eps^2) + |dOmega| alpha0 / (2 pi eps).
double predicted_degree(const CurvilinearPolygon& poly, double eps, double alpha0);

// int_0^s F . tau ds' along the boundary (F = r_perp / 2); at s = perimeter it equals |Omega|.
double boundary_flux(const CurvilinearPolygon& poly, double s);

struct Ansatz {
  ComplexField2D psi;
  int degree = 0;  // psi winds -degree times along the positively oriented boundary
};

// psi = f0(t / eps) exp(i phi(s) - i (p(s)_perp . nu(s)) t / (2 eps^2)) on a mesh with
// boundary coordinates, with phi decreasing by 2 pi n along the boundary and
// n = round(predicted_degree) unless `degree` is given.
Ansatz tubular_ansatz(const Mesh2D& mesh, const CurvilinearPolygon& poly, double eps, const Profile1D& f0,
                      double alpha0, int degree = -1);

struct AgmonReport {
  std::vector<double> d;     // physical distances eps, 2 eps, ..., 10 eps
  std::vector<double> mass;  // int_{dist > d} |psi|^2 / int |psi|^2
  double rate = 0.0;         // fitted decay of log mass per unit d / eps
  bool no_mass = false;      // max |psi| <= 1e-3
};

AgmonReport agmon_profile(const Mesh2D& mesh, const ComplexField2D& psi, double eps);

// sup over nodes with dist <= 3 eps of ||psi| - f0(dist / eps)|, skipping nodes within
// c2 eps |log eps| of a corner point. Needs mesh boundary coordinates.
double surface_profile_deviation(const Mesh2D& mesh, const ComplexField2D& psi, double eps, const Profile1D& f0,
                                 double c2 = 1.0);

// Sum of principal phase increments around the closed mesh row whose offset is
// nearest to `offset`. Throws NumericalError("vanishing on contour") when
// |psi| < 1e-3 max|psi| somewhere on the row.
int winding_number(const Mesh2D& mesh, const ComplexField2D& psi, double offset);

struct Supercurrent {
  std::vector<double> edge;                // Im(conj psi_i U psi_j) / |e| along edge i -> j
  std::vector<std::array<double, 2>> node; // least-squares nodal vectors
};

Supercurrent supercurrent(const Mesh2D& mesh, const Connection& conn, const ComplexField2D& psi);

struct DensityRow {
  double s0 = 0.0, s1 = 0.0;     // boundary arclength window
  double length = 0.0;
  double curvature = 0.0;        // int k ds over the window
  double quartic = 0.0;          // (1/2b) int_D |psi|^4
  double leading = 0.0;          // -eps E0 length
  double correction = 0.0;       // eps^2 E_corr int k
  double residual = 0.0;         // quartic - leading - correction
};

// Patches D are the nodes whose boundary coordinate lies in [s0, s1) (wrapping).
std::vector<DensityRow> density_vs_curvature(const Mesh2D& mesh, const ComplexField2D& psi, double eps, double b,
                                             const CurvilinearPolygon& poly, const SurfaceConstants& sc,
                                             const std::vector<std::array<double, 2>>& windows);

}  // namespace glcorner
