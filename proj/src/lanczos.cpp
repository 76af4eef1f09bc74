#include "glcorner/lanczos.hpp"

#include <Eigen/SparseCholesky>
#include <fmt/format.h>

#include <cmath>
#include <memory>
#include <random>

#include "glcorner/errors.hpp"

namespace glcorner {

namespace {

using SpC = Eigen::SparseMatrix<std::complex<double>>;
using VecC = Eigen::VectorXcd;

std::complex<double> mdot(const Eigen::VectorXd& M, const VecC& a, const VecC& b) {
  return (a.conjugate().array() * M.array() * b.array()).sum();
}

double mnorm(const Eigen::VectorXd& M, const VecC& a) { return std::sqrt(mdot(M, a, a).real()); }

// Factors H - sigma M; returns false if the factorization has a negative
// or zero pivot (sigma at or above the smallest eigenvalue).
bool factor_below(Eigen::SimplicialLDLT<SpC>& ldlt, const SpC& H, const Eigen::VectorXd& M, double sigma) {
  SpC A = H;
  for (int i = 0; i < A.rows(); ++i) A.coeffRef(i, i) -= sigma * M[i];
  ldlt.compute(A);
  if (ldlt.info() != Eigen::Success) return false;
  const auto& D = ldlt.vectorD();
  for (int i = 0; i < D.size(); ++i)
    if (!(D[i].real() > 0)) return false;
  return true;
}

}  // namespace

LanczosResult smallest_eigenpair(const SpC& H, const Eigen::VectorXd& M, double tol, double shift, int krylov,
                                 int max_restarts) {
  const int n = static_cast<int>(H.rows());
  if (n == 0) throw UsageError("empty eigenproblem");
  krylov = std::min(krylov, n);
  auto ldlt = std::make_unique<Eigen::SimplicialLDLT<SpC>>();
  double sigma = shift;
  for (int tries = 0; !factor_below(*ldlt, H, M, sigma); ++tries) {
    if (tries > 40) throw NumericalError("could not place the shift below the spectrum");
    sigma = sigma - 0.5 * std::abs(sigma) - 0.01;
  }

  std::mt19937_64 rng(12345);
  std::normal_distribution<double> nd;
  VecC v(n);
  for (int i = 0; i < n; ++i) v[i] = {nd(rng), nd(rng)};

  LanczosResult out;
  out.shift = sigma;
  double best_lambda = 0.0;
  for (int restart = 0; restart <= max_restarts; ++restart) {
    std::vector<VecC> Q;
    Q.reserve(krylov + 1);
    Q.push_back(v / mnorm(M, v));
    Eigen::VectorXd alpha(krylov), beta(krylov);
    int m = 0;
    for (; m < krylov; ++m) {
      VecC w = ldlt->solve((M.array() * Q[m].array()).matrix());
      alpha[m] = mdot(M, Q[m], w).real();
      // full reorthogonalization, twice
      for (int pass = 0; pass < 2; ++pass)
        for (const auto& q : Q) w -= mdot(M, q, w) * q;
      beta[m] = mnorm(M, w);
      ++out.iterations;
      if (beta[m] < 1e-14 * std::abs(alpha[m]) || m + 1 == krylov) {
        ++m;
        break;
      }
      Q.push_back(w / beta[m]);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
    tri.computeFromTridiagonal(alpha.head(m), beta.head(std::max(0, m - 1)));
    int top = m - 1;  // eigenvalues ascending; largest nu = 1/(lambda - sigma)
    double nu = tri.eigenvalues()[top];
    Eigen::VectorXd s = tri.eigenvectors().col(top);
    VecC y = VecC::Zero(n);
    for (int j = 0; j < m; ++j) y += s[j] * Q[j];
    y /= mnorm(M, y);
    double lambda = sigma + 1.0 / nu;
    VecC r = ((H * y).array() / M.array()).matrix() - lambda * y;
    double res = mnorm(M, r);
    out.value = lambda;
    out.vector = y;
    out.residual = res;
    out.restarts = restart;
    if (res <= tol) return out;
    v = y;
    // move the shift towards the Ritz value when that keeps it below the spectrum
    if (restart == 0 || lambda < best_lambda - 1e-12) {
      double trial = sigma + 0.6 * (lambda - sigma);
      auto next = std::make_unique<Eigen::SimplicialLDLT<SpC>>();
      if (factor_below(*next, H, M, trial)) {
        ldlt = std::move(next);
        sigma = trial;
        out.shift = sigma;
      }
      best_lambda = lambda;
    }
  }
  throw NumericalError(fmt::format("Lanczos did not converge: residual {:.3e} after {} restarts", out.residual,
                                   max_restarts),
                       out.residual);
}

}  // namespace glcorner
