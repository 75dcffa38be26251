#pragma once

#include "specgraph/types.hpp"

namespace specgraph {

/// Diminishing-stepsize numerator/denominator pair: xi1(t) is log t for both,
/// xi2(t) is t or sqrt(t).
enum class StepsizePair { LogOverT, LogOverSqrtT };

enum class IaInit { Identity, Inverse };

struct IaConfig {
  double lambda = 0.1;   // block-sparsity strength
  double eta = 0.01;     // CSD trust radius
  double epsilon = 1e-8; // PD floor
  double tau = 1.0;      // proximal weight of the convex surrogate
  // ADMM penalties (inverse-side sigma/omega/theta, CSD-side rho/delta).
  double sigma = 1.0, omega = 1.0, theta = 1.0, rho = 1.0, delta = 1.0;
  StepsizePair pair = StepsizePair::LogOverT;
  double c1 = 0.5, c2 = 0.99;
  double tol_abs_primal = 5e-4, tol_rel_primal = 5e-4;
  double tol_abs_dual = 5e-4, tol_rel_dual = 5e-4;
  long max_iters = 2000;
  IaInit init = IaInit::Identity;
};

void validate_config(const IaConfig& cfg);

/// Per-sweep residual summary: the six primal and two dual residual-family
/// norms, their eight thresholds, and the conjunction flag.
struct ResidualReport {
  double pi1 = 0, pi2 = 0, p3 = 0, pi4 = 0, pi5 = 0, pi6 = 0;  // primal norms
  double d1 = 0, d2 = 0;                                       // dual norms
  double thr_pi1 = 0, thr_pi2 = 0, thr_p3 = 0, thr_pi4 = 0, thr_pi5 = 0, thr_pi6 = 0;
  double thr_d1 = 0, thr_d2 = 0;
  bool converged = false;
};

/// Full ADMM/SCA state. All per-frequency vectors have length N^2 (vec of an
/// N x N slice). `group`/`group_dual` are stored frequency-major; the fiber
/// view used by the block threshold is the same data gathered per column.
/// The *_snap copies hold the sweep-start iterate: every update inside one
/// sweep reads only snapshots (plus values produced earlier in its own
/// phase), so frequencies can be processed in any order.
struct IaState {
  Eigen::Index n = 0;
  Eigen::Index m = 0;
  Eigen::Index t_samples = 0;
  FrequencyPartition partition;
  IaConfig cfg;
  SelectionMask offdiag;  // S2 pattern

  std::vector<VectorXcd> target;  // vec of the smoothed-periodogram slices

  // primal iterates and splitting copies
  std::vector<VectorXcd> prec, csd;            // inverse-CSD / CSD vectors
  std::vector<VectorXcd> prec_resid, csd_resid;  // inf-norm residual copies
  std::vector<VectorXcd> prec_pd, csd_pd;        // epsilon-PD consensus copies
  std::vector<VectorXcd> group;                  // group-sparse copy
  // scaled duals, one per constraint family
  std::vector<VectorXcd> prec_resid_dual, prec_pd_dual, csd_resid_dual, csd_pd_dual, group_dual;
  std::vector<double> trust_mult;  // KKT multiplier of the trust constraint

  // sweep-start snapshots
  std::vector<VectorXcd> prec_snap, csd_snap, prec_resid_snap, csd_resid_snap, prec_pd_snap,
      csd_pd_snap, group_snap;

  long iter = 0;
  double step = 1.0;  // current stepsize xi^t
};

IaState ia_init(const CsdTensor& smoothed, const FrequencyPartition& partition,
                const IaConfig& cfg);

/// Copies the current iterates into the sweep-start snapshots.
void ia_begin_sweep(IaState& state);

// One-frequency updates of the inverse-CSD subproblem (read snapshots).
void ia_update_prec(IaState& state, Eigen::Index k);
void ia_update_prec_resid_split(IaState& state, Eigen::Index k);
void ia_update_prec_pd_split(IaState& state, Eigen::Index k);

// One-frequency updates of the CSD subproblem (trust-region KKT + splits).
void ia_update_csd(IaState& state, Eigen::Index k);
void ia_update_csd_resid_split(IaState& state, Eigen::Index k);
void ia_update_csd_pd_split(IaState& state, Eigen::Index k);

/// Block soft-thresholding of the per-block fibers (one block).
void ia_update_group_split(IaState& state, Eigen::Index m);

/// All five scaled-dual families, after the primal/splitting phases.
void ia_update_duals(IaState& state);

/// xi^t = (xi^{t-1} + xi1(t)^{c1}) / (1 + c2 xi2(t)), natural log.
double ia_stepsize(long t, double prev, const IaConfig& cfg);

ResidualReport ia_residual_report(const IaState& state);

/// One full sweep: inverse phase, CSD phase, group phase, duals, residuals,
/// iteration counter and stepsize. `reverse` flips the frequency order inside
/// the phases (the result is identical; used to exercise schedule freedom).
ResidualReport ia_sweep(IaState& state, bool reverse = false);

/// Original objective sum_k ||F_k P_k - I||_inf + lambda * sum of fiber norms,
/// evaluated at the current iterates.
double ia_objective(const IaState& state);

struct IaResult {
  InverseCsdTensor prec;  // read out from the epsilon-PD consensus copy
  CsdTensor csd;
  std::vector<ResidualReport> trace;
  std::vector<double> objective;
  long iterations = 0;
  bool converged = false;
};

IaResult ia_learn(const CsdTensor& smoothed, const FrequencyPartition& partition,
                  const IaConfig& cfg);

}  // namespace specgraph
