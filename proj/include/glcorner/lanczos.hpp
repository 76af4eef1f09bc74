#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <complex>

namespace glcorner {

struct LanczosResult {
  double value = 0.0;
  Eigen::VectorXcd vector;  // M-normalized
  double residual = 0.0;    // ||M^{-1} H u - lambda u||_M / ||u||_M
  int iterations = 0;
  int restarts = 0;
  double shift = 0.0;
};

// Smallest eigenpair of H u = lambda M u (H Hermitian, M diagonal positive)
// by shift-invert Lanczos with full reorthogonalization in the M inner
// product. The shift is kept below the spectrum by checking the inertia of
// the LDL^T factorization, and moved closer once a Ritz value is known.
LanczosResult smallest_eigenpair(const Eigen::SparseMatrix<std::complex<double>>& H, const Eigen::VectorXd& M,
                                 double tol = 1e-8, double shift = 0.0, int krylov = 40, int max_restarts = 60);

}  // namespace glcorner
