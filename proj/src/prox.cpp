#include "specgraph/prox.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace specgraph {

VectorXd project_l1_ball(const VectorXd& v, double radius) {
  require(radius > 0, "l1-ball radius must be positive");
  require((v.array() >= 0).all(), "project_l1_ball expects nonnegative entries");
  if (v.lpNorm<1>() <= radius) return v;

  // Exact shift: sort descending, take the largest support size d with
  // v_(d) > (sum of top-d - radius) / d, then soft-threshold by that shift.
  std::vector<double> sorted(v.data(), v.data() + v.size());
  std::sort(sorted.begin(), sorted.end(), std::greater<double>());
  double running = 0.0;
  double shift = 0.0;
  for (std::size_t d = 0; d < sorted.size(); ++d) {
    running += sorted[d];
    const double candidate = (running - radius) / static_cast<double>(d + 1);
    if (sorted[d] > candidate) shift = candidate;
  }
  return (v.array() - shift).max(0.0).matrix();
}

VectorXcd prox_linf(const VectorXcd& z, double lambda_hat) {
  require(lambda_hat > 0, "prox weight must be positive");
  const VectorXd mags = z.cwiseAbs();
  const VectorXd projected = project_l1_ball(mags / lambda_hat, 1.0) * lambda_hat;
  VectorXcd out(z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    const double m = mags[i];
    const double kept = m - projected[i];
    // sign(0) = 0: prox maps exact zeros (and fully projected entries) to 0.
    out[i] = (m == 0.0 || kept <= 0.0) ? Complex(0.0, 0.0) : z[i] * (kept / m);
  }
  return out;
}

VectorXcd block_soft_threshold(const VectorXcd& z, double lambda_tilde) {
  require(lambda_tilde > 0, "threshold must be positive");
  const double norm = z.norm();
  if (norm <= lambda_tilde) return VectorXcd::Zero(z.size());
  return (1.0 - lambda_tilde / norm) * z;
}

MatrixXcd project_hermitian_pd(const MatrixXcd& w, double eps) {
  require(eps > 0, "PD floor must be positive");
  require(w.rows() == w.cols(), "projection needs a square matrix");
  require(w.allFinite(), "projection input has non-finite entries");
  const MatrixXcd sym = hermitianize(w);
  Eigen::SelfAdjointEigenSolver<MatrixXcd> eig(sym);
  require_numeric(eig.info() == Eigen::Success, "eigendecomposition failed");
  const VectorXd clamped = eig.eigenvalues().cwiseMax(eps);
  return eig.eigenvectors() * clamped.asDiagonal() * eig.eigenvectors().adjoint();
}

VectorXcd solve_gamma1(const MatrixXcd& f, double tau, double omega, double sigma, double theta,
                       const VectorXcd& rhs) {
  const Eigen::Index n = f.rows();
  require(f.cols() == n, "F must be square");
  require(rhs.size() == n * n, "rhs must have length N^2");
  require(tau + omega > 0, "tau + omega must be positive");
  const MatrixXcd base =
      sigma * (f.adjoint() * f) + (tau + omega + theta) * MatrixXcd::Identity(n, n);
  VectorXcd x(n * n);
  MatrixXcd block(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    block = base;
    block(j, j) -= theta;  // S2 skips the diagonal fiber of column j
    Eigen::LLT<MatrixXcd> llt(block);
    require_numeric(llt.info() == Eigen::Success, "Gamma1 block is not positive definite");
    x.segment(j * n, n) = llt.solve(rhs.segment(j * n, n));
  }
  return x;
}

VectorXcd solve_gamma2(const MatrixXcd& p, double tau, double delta, double rho, double beta,
                       const VectorXcd& rhs) {
  const Eigen::Index n = p.rows();
  require(p.cols() == n, "P must be square");
  require(rhs.size() == n * n, "rhs must have length N^2");
  require(beta >= 0, "beta must be nonnegative");
  const double shift = 0.5 * tau + beta + 0.5 * delta;
  require(shift > 0, "tau/2 + beta + delta/2 must be positive");
  const MatrixXcd block = 0.5 * rho * (p.adjoint() * p) + shift * MatrixXcd::Identity(n, n);
  Eigen::LLT<MatrixXcd> llt(block);
  require_numeric(llt.info() == Eigen::Success, "Gamma2 block is not positive definite");
  VectorXcd x(n * n);
  for (Eigen::Index j = 0; j < n; ++j)
    x.segment(j * n, n) = llt.solve(rhs.segment(j * n, n));
  return x;
}

}  // namespace specgraph
