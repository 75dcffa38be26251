#pragma once

#include "specgraph/types.hpp"

namespace specgraph {

/// Euclidean projection of a nonnegative vector onto {x : ||x||_1 <= radius}.
/// Sort-based exact thresholding; inputs already inside the ball are returned
/// unchanged (bitwise).
VectorXd project_l1_ball(const VectorXd& v, double radius);

/// prox of lambda_hat * ||.||_inf on C^n via Moreau decomposition:
/// sign(z) .* (|z| - lambda_hat * proj_{l1 ball}(|z| / lambda_hat)).
/// Nonzero outputs keep the phases of the corresponding inputs; sign(0) = 0.
VectorXcd prox_linf(const VectorXcd& z, double lambda_hat);

/// Block soft-thresholding: max(0, 1 - lambda_tilde / ||z||_2) * z,
/// with the zero vector returned whenever ||z||_2 <= lambda_tilde.
VectorXcd block_soft_threshold(const VectorXcd& z, double lambda_tilde);

/// Projection onto the Hermitian matrices with minimum eigenvalue >= eps:
/// Hermitianize, eigendecompose, clamp eigenvalues at eps, reassemble.
MatrixXcd project_hermitian_pd(const MatrixXcd& w, double eps);

/// Solves Gamma1 x = rhs with
///   Gamma1 = (tau+omega) I_{N^2} + sigma (I_N (x) F)^H (I_N (x) F) + theta S2,
/// block-wise: N Hermitian PD blocks of size N, where block j differs from
/// the others only by a zeroed theta at diagonal entry j (the S2 pattern).
VectorXcd solve_gamma1(const MatrixXcd& f, double tau, double omega, double sigma, double theta,
                       const VectorXcd& rhs);

/// Solves Gamma2 x = rhs with
///   Gamma2 = I_N (x) ((tau/2 + beta + delta/2) I_N + (rho/2) P^H P),
/// via a single Hermitian PD factorization reused across the N blocks.
VectorXcd solve_gamma2(const MatrixXcd& p, double tau, double delta, double rho, double beta,
                       const VectorXcd& rhs);

}  // namespace specgraph
