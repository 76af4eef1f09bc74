#pragma once

#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Sparse>

#include "glcorner/mesh.hpp"

namespace glcorner {

using Complex = std::complex<double>;
using ComplexField2D = std::vector<Complex>;

// Per-edge parallel transport e^{i theta_ij}, i -> j along mesh.edges.
struct Connection {
  std::vector<Complex> U;
};

// theta_ij = (int_i^j F . dl) / eps^2 with F = r_perp / 2.
Connection make_connection(const Mesh2D& mesh, double eps);
// theta'_ij = theta_ij + phi_i - phi_j, pairing with psi' = psi e^{i phi}.
Connection gauge_transform(const Mesh2D& mesh, const Connection& c, const std::vector<double>& phi);
Connection zero_connection(const Mesh2D& mesh);

struct GLParams {
  double eps = 0.1;
  double b = 1.5;
  void validate() const;
};

// E = sum_edges w |U psi_j - psi_i|^2 - sum_i m_i (2|psi_i|^2 - |psi_i|^4) / (2 b eps^2)
double gl_energy(const Mesh2D& mesh, const Connection& c, const ComplexField2D& psi, const GLParams& p);
double gl_energy(const Mesh2D& mesh, const ComplexField2D& psi, const GLParams& p);
// Wirtinger gradient dE/d(conj psi).
ComplexField2D gl_gradient(const Mesh2D& mesh, const Connection& c, const ComplexField2D& psi, const GLParams& p);
// ||M^{-1} G||_M / (max(||psi||_M, 1e-6 sqrt|Omega|) / (b eps^2)) over free nodes.
double gl_relative_residual(const Mesh2D& mesh, const Connection& c, const ComplexField2D& psi, const GLParams& p,
                            bool dirichlet);

using SparseC = Eigen::SparseMatrix<Complex>;

// Hermitian matrix K with psi^H K psi = sum_edges w |U psi_j - psi_i|^2,
// restricted to nodes with free_index[i] >= 0 (numbered by free_index).
SparseC magnetic_matrix(const Mesh2D& mesh, const Connection& c, const std::vector<int>& free_index);

enum class BoundaryMode { Natural, Dirichlet };
enum class Preconditioner { None, Magnetic };

struct SolveOptions {
  double tol = 1e-6;
  int max_iter = 50000;
  Preconditioner precond = Preconditioner::Magnetic;
  bool record_history = true;
  // called every `progress_every` iterations with (iteration, energy, residual)
  std::function<void(int, double, double)> progress;
  int progress_every = 500;
};

struct SolveReport {
  ComplexField2D psi;
  double energy = 0.0;
  double residual = 0.0;
  int iterations = 0;
  int rejected_steps = 0;
  bool converged = false;
  std::vector<double> energy_history;  // energy after each accepted step
  std::vector<double> energy_changes;  // accurately summed E_{k+1} - E_k
};

// Barzilai-Borwein gradient flow in the metric of K_A + M/(b eps^2) with
// step rejection on energy increase. Dirichlet mode freezes nodes tagged
// Dirichlet at their initial values. Throws NumericalError at the iteration cap.
SolveReport minimize(const Mesh2D& mesh, const GLParams& p, ComplexField2D init,
                     BoundaryMode mode = BoundaryMode::Natural, const SolveOptions& opt = {});

}  // namespace glcorner
