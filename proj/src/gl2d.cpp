#include "glcorner/gl2d.hpp"

#include <cmath>
#include <memory>

#include <Eigen/SparseCholesky>
#include <fmt/format.h>

#include "glcorner/errors.hpp"

namespace glcorner {

void GLParams::validate() const {
  if (!(eps > 0) || !std::isfinite(eps)) throw UsageError("eps must be positive");
  if (!(b > 0) || !std::isfinite(b)) throw UsageError("b must be positive");
}

Connection make_connection(const Mesh2D& mesh, double eps) {
  Connection c;
  c.U.resize(mesh.num_edges());
  const double s = 1.0 / (eps * eps);
  for (int e = 0; e < mesh.num_edges(); ++e) c.U[e] = std::polar(1.0, mesh.flux[e] * s);
  return c;
}

Connection gauge_transform(const Mesh2D& mesh, const Connection& c, const std::vector<double>& phi) {
  Connection out = c;
  for (int e = 0; e < mesh.num_edges(); ++e) {
    auto [i, j] = mesh.edges[e];
    out.U[e] *= std::polar(1.0, phi[i] - phi[j]);
  }
  return out;
}

Connection zero_connection(const Mesh2D& mesh) { return {std::vector<Complex>(mesh.num_edges(), Complex(1.0, 0.0))}; }

double gl_energy(const Mesh2D& mesh, const Connection& c, const ComplexField2D& psi, const GLParams& p) {
  p.validate();
  if (psi.size() != mesh.nodes.size()) throw UsageError("field size does not match the mesh");
  double kin = 0.0, pot = 0.0;
  for (int e = 0; e < mesh.num_edges(); ++e) {
    auto [i, j] = mesh.edges[e];
    kin += mesh.weight[e] * std::norm(c.U[e] * psi[j] - psi[i]);
  }
  for (size_t i = 0; i < psi.size(); ++i) {
    double r = std::norm(psi[i]);
    pot += mesh.mass[i] * (2.0 * r - r * r);
  }
  return kin - pot / (2.0 * p.b * p.eps * p.eps);
}

double gl_energy(const Mesh2D& mesh, const ComplexField2D& psi, const GLParams& p) {
  return gl_energy(mesh, make_connection(mesh, p.eps), psi, p);
}

ComplexField2D gl_gradient(const Mesh2D& mesh, const Connection& c, const ComplexField2D& psi, const GLParams& p) {
  ComplexField2D g(psi.size(), Complex(0.0, 0.0));
  for (int e = 0; e < mesh.num_edges(); ++e) {
    auto [i, j] = mesh.edges[e];
    Complex D = c.U[e] * psi[j] - psi[i];
    g[i] -= mesh.weight[e] * D;
    g[j] += mesh.weight[e] * std::conj(c.U[e]) * D;
  }
  const double cc = 1.0 / (p.b * p.eps * p.eps);
  for (size_t i = 0; i < psi.size(); ++i) g[i] -= mesh.mass[i] * cc * (1.0 - std::norm(psi[i])) * psi[i];
  return g;
}

namespace {

double residual_of(const Mesh2D& mesh, const ComplexField2D& psi, const ComplexField2D& g,
                   const std::vector<int>& free_index, const GLParams& p) {
  double rr = 0.0, pp = 0.0;
  for (size_t i = 0; i < psi.size(); ++i) {
    if (free_index[i] < 0) continue;
    rr += std::norm(g[i]) / mesh.mass[i];
    pp += mesh.mass[i] * std::norm(psi[i]);
  }
  const double floor = 1e-6 * std::sqrt(mesh.area());
  const double scale = std::max(std::sqrt(pp), floor) / (p.b * p.eps * p.eps);
  return std::sqrt(rr) / scale;
}

std::vector<int> free_nodes(const Mesh2D& mesh, bool dirichlet) {
  std::vector<int> idx(mesh.nodes.size());
  int k = 0;
  for (size_t i = 0; i < idx.size(); ++i)
    idx[i] = (dirichlet && mesh.tag[i] == NodeTag::Dirichlet) ? -1 : k++;
  return idx;
}

// E(psi + d) - E(psi), summed from local differences.
double energy_change(const Mesh2D& mesh, const Connection& c, const ComplexField2D& psi, const ComplexField2D& d,
                     const GLParams& p) {
  double kin = 0.0, pot = 0.0;
  for (int e = 0; e < mesh.num_edges(); ++e) {
    auto [i, j] = mesh.edges[e];
    Complex D = c.U[e] * psi[j] - psi[i];
    Complex dD = c.U[e] * d[j] - d[i];
    kin += mesh.weight[e] * (2.0 * (std::conj(D) * dD).real() + std::norm(dD));
  }
  for (size_t i = 0; i < psi.size(); ++i) {
    double r = std::norm(psi[i]);
    double dr = 2.0 * (std::conj(psi[i]) * d[i]).real() + std::norm(d[i]);
    pot += mesh.mass[i] * (2.0 * dr - dr * (2.0 * r + dr));
  }
  return kin - pot / (2.0 * p.b * p.eps * p.eps);
}

double re_dot(const ComplexField2D& a, const ComplexField2D& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += (std::conj(a[i]) * b[i]).real();
  return s;
}

}  // namespace

double gl_relative_residual(const Mesh2D& mesh, const Connection& c, const ComplexField2D& psi, const GLParams& p,
                            bool dirichlet) {
  return residual_of(mesh, psi, gl_gradient(mesh, c, psi, p), free_nodes(mesh, dirichlet), p);
}

SparseC magnetic_matrix(const Mesh2D& mesh, const Connection& c, const std::vector<int>& free_index) {
  int n = 0;
  for (int v : free_index) n = std::max(n, v + 1);
  std::vector<Eigen::Triplet<Complex>> trip;
  trip.reserve(4 * mesh.num_edges());
  for (int e = 0; e < mesh.num_edges(); ++e) {
    auto [i, j] = mesh.edges[e];
    int fi = free_index[i], fj = free_index[j];
    double w = mesh.weight[e];
    if (fi >= 0) trip.emplace_back(fi, fi, w);
    if (fj >= 0) trip.emplace_back(fj, fj, w);
    if (fi >= 0 && fj >= 0) {
      trip.emplace_back(fi, fj, -w * c.U[e]);
      trip.emplace_back(fj, fi, -w * std::conj(c.U[e]));
    }
  }
  SparseC K(n, n);
  K.setFromTriplets(trip.begin(), trip.end());
  return K;
}

SolveReport minimize(const Mesh2D& mesh, const GLParams& p, ComplexField2D psi, BoundaryMode mode,
                     const SolveOptions& opt) {
  p.validate();
  if (psi.size() != mesh.nodes.size()) throw UsageError("initial field size does not match the mesh");
  const bool dirichlet = mode == BoundaryMode::Dirichlet;
  const std::vector<int> fidx = free_nodes(mesh, dirichlet);
  const Connection conn = make_connection(mesh, p.eps);
  const double cc = 1.0 / (p.b * p.eps * p.eps);
  const size_t N = psi.size();

  using LDLT = Eigen::SimplicialLDLT<SparseC>;
  std::unique_ptr<LDLT> solver;
  SparseC P;
  int nfree = 0;
  for (int v : fidx) nfree = std::max(nfree, v + 1);
  if (opt.precond == Preconditioner::Magnetic) {
    P = magnetic_matrix(mesh, conn, fidx);
    for (size_t i = 0; i < N; ++i)
      if (fidx[i] >= 0) P.coeffRef(fidx[i], fidx[i]) += cc * mesh.mass[i];
    solver = std::make_unique<LDLT>(P);
    if (solver->info() != Eigen::Success) throw NumericalError("preconditioner factorization failed");
  }
  Eigen::VectorXcd buf(nfree);
  auto precondition = [&](const ComplexField2D& g, ComplexField2D& d) {
    if (!solver) {
      for (size_t i = 0; i < N; ++i) d[i] = fidx[i] >= 0 ? -g[i] / mesh.mass[i] : Complex(0.0);
      return;
    }
    for (size_t i = 0; i < N; ++i)
      if (fidx[i] >= 0) buf[fidx[i]] = g[i];
    Eigen::VectorXcd x = solver->solve(buf);
    for (size_t i = 0; i < N; ++i) d[i] = fidx[i] >= 0 ? -x[fidx[i]] : Complex(0.0);
  };

  SolveReport rep;
  double E = gl_energy(mesh, conn, psi, p);
  if (opt.record_history) rep.energy_history.push_back(E);
  ComplexField2D g = gl_gradient(mesh, conn, psi, p), g_new(N), d(N), d_new(N), step(N);
  for (size_t i = 0; i < N; ++i)
    if (fidx[i] < 0) g[i] = 0.0;
  double res = residual_of(mesh, psi, g, fidx, p);
  precondition(g, d);
  double tau = solver ? 1.0 : 0.1 / (cc + 1.0);
  int it = 0;
  for (; it < opt.max_iter && res > opt.tol; ++it) {
    bool accepted = false;
    double dE = 0.0;
    for (int tries = 0; tries < 60; ++tries) {
      for (size_t i = 0; i < N; ++i) step[i] = tau * d[i];
      dE = energy_change(mesh, conn, psi, step, p);
      if (dE <= 0.0 && std::isfinite(dE)) {
        accepted = true;
        break;
      }
      tau *= 0.5;
      ++rep.rejected_steps;
    }
    if (!accepted)
      throw NumericalError(fmt::format("2D flow stagnated at iteration {} (relative residual {:.3e})", it, res), res);
    for (size_t i = 0; i < N; ++i) psi[i] += step[i];
    E += dE;
    if (opt.record_history) {
      rep.energy_history.push_back(E);
      rep.energy_changes.push_back(dE);
    }
    g_new = gl_gradient(mesh, conn, psi, p);
    for (size_t i = 0; i < N; ++i)
      if (fidx[i] < 0) g_new[i] = 0.0;
    res = residual_of(mesh, psi, g_new, fidx, p);
    precondition(g_new, d_new);
    // Barzilai-Borwein step in the preconditioner metric (short variant)
    ComplexField2D y(N), py(N);
    for (size_t i = 0; i < N; ++i) {
      y[i] = g_new[i] - g[i];
      py[i] = d[i] - d_new[i];  // P^{-1} y
    }
    double sy = re_dot(step, y), ypy = re_dot(y, py);
    if (sy > 0 && ypy > 0)
      tau = sy / ypy;
    else
      tau = std::min(2.0 * tau, 1e3);
    std::swap(g, g_new);
    std::swap(d, d_new);
    if (opt.progress && opt.progress_every > 0 && it % opt.progress_every == 0) opt.progress(it, E, res);
  }
  rep.iterations = it;
  rep.residual = res;
  rep.converged = res <= opt.tol;
  rep.energy = gl_energy(mesh, conn, psi, p);
  rep.psi = std::move(psi);
  if (!rep.converged)
    throw NumericalError(fmt::format("2D flow hit the iteration cap ({}) at relative residual {:.3e}", it, res), res);
  return rep;
}

}  // namespace glcorner
