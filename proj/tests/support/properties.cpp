#include "properties.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "glcorner/corner.hpp"
#include "glcorner/oned.hpp"

namespace glcorner::testing {

Mesh2D small_disc_mesh(double eps) {
  LayerMeshOptions o;
  o.h_s = 0.5;
  o.h_t = 0.5;
  o.depth = 4.0;
  return build_layer_mesh(make_disc(1.0), eps, o);
}

Mesh2D flat_rectangle_mesh(double h, double L, double ell) {
  return build_corner_mesh({M_PI, L, ell}, h).mesh;
}

ComplexField2D random_field(int n, std::uint64_t seed, double amplitude) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-amplitude, amplitude);
  ComplexField2D psi(n);
  for (auto& z : psi) z = {u(rng), u(rng)};
  return psi;
}

double gauge_defect(const Mesh2D& mesh, double eps, int trials, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ang(-M_PI, M_PI);
  Connection c = make_connection(mesh, eps);
  GLParams p{eps, 1.5};
  double worst = 0;
  for (int k = 0; k < trials; ++k) {
    ComplexField2D psi = random_field(mesh.num_nodes(), seed + 1 + k);
    double e = gl_energy(mesh, c, psi, p);
    std::vector<double> phi(mesh.num_nodes());
    for (auto& v : phi) v = 50 * ang(rng);
    ComplexField2D q(psi.size());
    for (size_t i = 0; i < psi.size(); ++i) q[i] = psi[i] * std::polar(1.0, phi[i]);
    double e2 = gl_energy(mesh, gauge_transform(mesh, c, phi), q, p);
    worst = std::max(worst, std::abs(e2 - e) / std::abs(e));
  }
  return worst;
}

double curl_defect(const Mesh2D& mesh) {
  auto edge_flux = [&](int i, int j) {
    std::array<int, 2> key{std::min(i, j), std::max(i, j)};
    auto it = std::lower_bound(mesh.edges.begin(), mesh.edges.end(), key);
    double f = mesh.flux[it - mesh.edges.begin()];
    return i < j ? f : -f;
  };
  double worst = 0;
  for (const auto& t : mesh.tris) {
    Vec2 a = mesh.nodes[t[0]], b = mesh.nodes[t[1]], c = mesh.nodes[t[2]];
    double area = 0.5 * cross(b - a, c - a);
    double circ = edge_flux(t[0], t[1]) + edge_flux(t[1], t[2]) + edge_flux(t[2], t[0]);
    worst = std::max(worst, std::abs(circ - area));
  }
  return worst;
}

DescentCheck descent_check(const Mesh2D& mesh, double eps, double b, std::uint64_t seed) {
  SolveOptions o;
  o.tol = 1e-6;
  o.max_iter = 20000;
  SolveReport r = minimize(mesh, {eps, b}, random_field(mesh.num_nodes(), seed, 0.7));
  DescentCheck d;
  d.accepted = static_cast<int>(r.energy_changes.size());
  d.max_change = r.energy_changes.empty() ? 0.0 : *std::max_element(r.energy_changes.begin(), r.energy_changes.end());
  for (const auto& z : r.psi) d.max_modulus = std::max(d.max_modulus, std::abs(z));
  d.energy = r.energy;
  d.converged = r.converged;
  return d;
}

namespace {

double order_of(double e1, double e2, double e3) { return std::log2(std::abs(e1 - e2) / std::abs(e2 - e3)); }

double energy_1d(double h) {
  OneDProblem p;
  p.b = 1.5;
  p.alpha = -0.78;
  p.T = 10;
  p.h = h;
  std::vector<double> f = grid_points(p);
  for (auto& v : f) v = 0.4 * std::exp(-0.5 * v * v);
  return f1d_energy(p, f);
}

double energy_2d(double h) {
  Mesh2D m = flat_rectangle_mesh(h);
  ComplexField2D psi(m.num_nodes());
  for (int i = 0; i < m.num_nodes(); ++i) {
    Vec2 x = m.nodes[i];
    psi[i] = std::exp(-(x.x * x.x + (x.y - 1) * (x.y - 1)) / 8) * std::polar(1.0, 0.5 * x.x + 0.3 * x.y);
  }
  return gl_energy(m, make_connection(m, 1.0), psi, {1.0, 1.5});
}

}  // namespace

double order_1d(double h) { return order_of(energy_1d(h), energy_1d(h / 2), energy_1d(h / 4)); }
double order_2d(double h) { return order_of(energy_2d(h), energy_2d(h / 2), energy_2d(h / 4)); }

}  // namespace glcorner::testing
