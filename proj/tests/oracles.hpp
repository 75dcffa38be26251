#pragma once

// Test-only reference implementations, kept deliberately independent of the
// library code paths they check: dense Kronecker assembly solved by pivoted
// LU, scalar bisections for the proximal operators, direct DFT summation for
// the spectral chain, and exhaustive support enumeration for the block-sparse
// selector.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <vector>

#include "specgraph/rng.hpp"
#include "specgraph/types.hpp"

namespace oracles {

using specgraph::Complex;
using specgraph::MatrixXcd;
using specgraph::MatrixXd;
using specgraph::VectorXcd;
using specgraph::VectorXd;

inline VectorXd random_vector(specgraph::Rng& rng, Eigen::Index n, double scale = 1.0) {
  VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = scale * rng.next_gaussian();
  return v;
}

inline VectorXcd random_cvector(specgraph::Rng& rng, Eigen::Index n, double scale = 1.0) {
  VectorXcd v(n);
  for (Eigen::Index i = 0; i < n; ++i)
    v[i] = Complex(scale * rng.next_gaussian(), scale * rng.next_gaussian());
  return v;
}

inline MatrixXcd random_cmatrix(specgraph::Rng& rng, Eigen::Index n, double scale = 1.0) {
  MatrixXcd m(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i)
      m(i, j) = Complex(scale * rng.next_gaussian(), scale * rng.next_gaussian());
  return m;
}

inline MatrixXcd random_hermitian(specgraph::Rng& rng, Eigen::Index n, double scale = 1.0) {
  const MatrixXcd m = random_cmatrix(rng, n, scale);
  return 0.5 * (m + m.adjoint());
}

inline MatrixXcd random_hermitian_pd(specgraph::Rng& rng, Eigen::Index n, double ridge = 0.5) {
  const MatrixXcd m = random_cmatrix(rng, n);
  return m * m.adjoint() / static_cast<double>(n) + ridge * MatrixXcd::Identity(n, n);
}

inline MatrixXcd kron(const MatrixXcd& a, const MatrixXcd& b) {
  MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline MatrixXcd s2_matrix(Eigen::Index n) {
  MatrixXcd s = MatrixXcd::Zero(n * n, n * n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i)
      if (i != j) s(i + n * j, i + n * j) = 1.0;
  return s;
}

inline MatrixXcd dense_gamma1(const MatrixXcd& f, double tau, double omega, double sigma,
                              double theta) {
  const Eigen::Index n = f.rows();
  const MatrixXcd op = kron(MatrixXcd::Identity(n, n), f);
  return (tau + omega) * MatrixXcd::Identity(n * n, n * n) + sigma * op.adjoint() * op +
         theta * s2_matrix(n);
}

inline MatrixXcd dense_gamma2(const MatrixXcd& p, double tau, double delta, double rho,
                              double beta) {
  const Eigen::Index n = p.rows();
  return kron(MatrixXcd::Identity(n, n),
              (0.5 * tau + beta + 0.5 * delta) * MatrixXcd::Identity(n, n) +
                  0.5 * rho * p.adjoint() * p);
}

inline VectorXcd dense_solve(const MatrixXcd& a, const VectorXcd& rhs) {
  return Eigen::FullPivLU<MatrixXcd>(a).solve(rhs);
}

/// l1-ball projection by bisection on the soft-threshold shift (no sorting).
inline VectorXd project_l1_ball_bisect(const VectorXd& v, double radius) {
  if (v.lpNorm<1>() <= radius) return v;
  double lo = 0.0, hi = v.maxCoeff();
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double mass = (v.array() - mid).max(0.0).sum();
    if (mass > radius) lo = mid; else hi = mid;
  }
  const double shift = 0.5 * (lo + hi);
  return (v.array() - shift).max(0.0).matrix();
}

/// prox of lambda*||.||_inf by bisection on the clip level t:
/// the minimizer clips |z| at the t with sum(|z|-t)_+ = lambda.
inline VectorXcd prox_linf_bisect(const VectorXcd& z, double lambda) {
  const VectorXd mags = z.cwiseAbs();
  if (mags.sum() <= lambda) return VectorXcd::Zero(z.size());
  double lo = 0.0, hi = mags.maxCoeff();
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double excess = (mags.array() - mid).max(0.0).sum();
    if (excess > lambda) lo = mid; else hi = mid;
  }
  const double level = 0.5 * (lo + hi);
  VectorXcd out(z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    const double m = mags[i];
    out[i] = m == 0.0 ? Complex(0, 0) : z[i] * (std::min(m, level) / m);
  }
  return out;
}

/// Objective value of the inf-norm prox problem, for optimality comparisons.
inline double prox_linf_objective(const VectorXcd& x, const VectorXcd& z, double lambda) {
  return 0.5 * (x - z).squaredNorm() + lambda * x.cwiseAbs().maxCoeff();
}

/// prox of lambda*||.||_2 by ternary search over the ray x = alpha z.
inline VectorXcd block_soft_threshold_search(const VectorXcd& z, double lambda) {
  const double norm = z.norm();
  if (norm == 0.0) return z;
  const auto value = [&](double alpha) {
    return 0.5 * (alpha - 1.0) * (alpha - 1.0) * norm * norm + lambda * alpha * norm;
  };
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 300; ++it) {
    const double a = lo + (hi - lo) / 3.0;
    const double b = hi - (hi - lo) / 3.0;
    if (value(a) < value(b)) hi = b; else lo = a;
  }
  return 0.5 * (lo + hi) * z;
}

}  // namespace oracles
