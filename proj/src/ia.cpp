#include "specgraph/ia.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "specgraph/parallel.hpp"
#include "specgraph/prox.hpp"
#include "specgraph/spectral.hpp"

namespace specgraph {

namespace {

inline Eigen::Map<const MatrixXcd> mat_view(const VectorXcd& v, Eigen::Index n) {
  return Eigen::Map<const MatrixXcd>(v.data(), n, n);
}

inline VectorXcd vec_of(const MatrixXcd& m) {
  return Eigen::Map<const VectorXcd>(m.data(), m.size());
}

inline VectorXcd identity_vec(Eigen::Index n) {
  return vec_of(MatrixXcd::Identity(n, n));
}

VectorXcd masked(const SelectionMask& mask, const VectorXcd& v) {
  VectorXcd out = v;
  for (Eigen::Index c = 0; c < v.size(); ++c)
    if (!mask.keep[static_cast<std::size_t>(c)]) out[c] = Complex(0, 0);
  return out;
}

}  // namespace

void validate_config(const IaConfig& cfg) {
  require(cfg.lambda >= 0, "lambda must be nonnegative");
  require(cfg.eta > 0, "eta must be positive");
  require(cfg.epsilon > 0, "epsilon must be positive");
  require(cfg.tau > 0, "tau must be positive");
  require(cfg.sigma > 0 && cfg.omega > 0 && cfg.theta > 0 && cfg.rho > 0 && cfg.delta > 0,
          "ADMM penalties must be positive");
  require(cfg.c1 > 0 && cfg.c1 <= cfg.c2 && cfg.c2 < 1, "need 0 < c1 <= c2 < 1");
  require(cfg.tol_abs_primal > 0 && cfg.tol_rel_primal > 0 && cfg.tol_abs_dual > 0 &&
              cfg.tol_rel_dual > 0,
          "tolerances must be positive");
  require(cfg.max_iters > 0, "max_iters must be positive");
}

IaState ia_init(const CsdTensor& smoothed, const FrequencyPartition& partition,
                const IaConfig& cfg) {
  validate_config(cfg);
  require(partition.total == smoothed.m(), "partition does not match tensor length");
  for (const auto& s : smoothed.slices)
    require(s.allFinite(), "smoothed tensor contains non-finite values");

  IaState st;
  st.n = smoothed.n();
  st.m = smoothed.m();
  st.t_samples = smoothed.t;
  st.partition = partition;
  st.cfg = cfg;
  st.offdiag = make_mask(MaskKind::OffDiagonal, st.n);

  const auto mm = static_cast<std::size_t>(st.m);
  const VectorXcd eye = identity_vec(st.n);
  st.target.resize(mm);
  st.prec.resize(mm);
  st.csd.resize(mm);
  st.prec_resid.resize(mm);
  st.csd_resid.resize(mm);
  st.prec_pd.resize(mm);
  st.csd_pd.resize(mm);
  st.group.resize(mm);
  const VectorXcd zero = VectorXcd::Zero(st.n * st.n);
  st.prec_resid_dual.assign(mm, zero);
  st.prec_pd_dual.assign(mm, zero);
  st.csd_resid_dual.assign(mm, zero);
  st.csd_pd_dual.assign(mm, zero);
  st.group_dual.assign(mm, zero);
  st.trust_mult.assign(mm, 0.0);

  std::vector<MatrixXcd> init_prec;
  if (cfg.init == IaInit::Inverse) {
    try {
      init_prec = naive_inverse(smoothed).slices;
    } catch (const NumericalError& e) {
      throw NumericalError(std::string("inverse initialization failed: ") + e.what());
    }
  }
  for (std::size_t k = 0; k < mm; ++k) {
    st.target[k] = vec_of(smoothed.slices[k]);
    st.csd[k] = st.target[k];
    st.prec[k] = cfg.init == IaInit::Identity ? eye : vec_of(init_prec[k]);
    const VectorXcd product = vec_of(smoothed.slices[k] * mat_view(st.prec[k], st.n));
    st.prec_resid[k] = product - eye;
    st.csd_resid[k] = product - eye;
    st.prec_pd[k] = st.prec[k];
    st.csd_pd[k] = st.csd[k];
    st.group[k] = masked(st.offdiag, st.prec[k]);
  }
  st.iter = 0;
  st.step = 1.0;
  ia_begin_sweep(st);
  return st;
}

void ia_begin_sweep(IaState& state) {
  state.prec_snap = state.prec;
  state.csd_snap = state.csd;
  state.prec_resid_snap = state.prec_resid;
  state.csd_resid_snap = state.csd_resid;
  state.prec_pd_snap = state.prec_pd;
  state.csd_pd_snap = state.csd_pd;
  state.group_snap = state.group;
}

void ia_update_prec(IaState& st, Eigen::Index k) {
  const auto ki = static_cast<std::size_t>(k);
  const auto& cfg = st.cfg;
  const auto f = mat_view(st.csd_snap[ki], st.n);
  const VectorXcd eye = identity_vec(st.n);

  VectorXcd rhs = cfg.tau * st.prec_snap[ki] + cfg.omega * (st.prec_pd_snap[ki] - st.prec_pd_dual[ki]);
  const MatrixXcd carry =
      mat_view(st.prec_resid_snap[ki], st.n) - mat_view(st.prec_resid_dual[ki], st.n) +
      MatrixXcd::Identity(st.n, st.n);
  rhs += cfg.sigma * vec_of(f.adjoint() * carry);
  rhs += cfg.theta * masked(st.offdiag, st.group_snap[ki] - st.group_dual[ki]);

  const VectorXcd fresh = solve_gamma1(f, cfg.tau, cfg.omega, cfg.sigma, cfg.theta, rhs);
  st.prec[ki] = st.prec_snap[ki] + st.step * (fresh - st.prec_snap[ki]);
}

void ia_update_prec_resid_split(IaState& st, Eigen::Index k) {
  const auto ki = static_cast<std::size_t>(k);
  const auto f = mat_view(st.csd_snap[ki], st.n);
  const VectorXcd arg = vec_of(f * mat_view(st.prec[ki], st.n)) - identity_vec(st.n) +
                        st.prec_resid_dual[ki];
  st.prec_resid[ki] = prox_linf(arg, 1.0 / st.cfg.sigma);
}

void ia_update_prec_pd_split(IaState& st, Eigen::Index k) {
  const auto ki = static_cast<std::size_t>(k);
  const MatrixXcd w = mat_view(st.prec[ki], st.n) + mat_view(st.prec_pd_dual[ki], st.n);
  st.prec_pd[ki] = vec_of(project_hermitian_pd(w, st.cfg.epsilon));
}

void ia_update_csd(IaState& st, Eigen::Index k) {
  const auto ki = static_cast<std::size_t>(k);
  const auto& cfg = st.cfg;
  const auto p = mat_view(st.prec_snap[ki], st.n);

  // Gamma2(beta) = I (x) (B0 + beta I); one eigendecomposition of B0 serves
  // every bisection step, and unitary invariance lets the constraint value
  // ||f(beta) - f~||^2 be evaluated in the eigenbasis at O(N^2) per step.
  const MatrixXcd b0 = (0.5 * cfg.tau + 0.5 * cfg.delta) * MatrixXcd::Identity(st.n, st.n) +
                       0.5 * cfg.rho * (p.adjoint() * p);
  Eigen::SelfAdjointEigenSolver<MatrixXcd> eig(b0);
  require_numeric(eig.info() == Eigen::Success,
                  "eigendecomposition failed in the CSD update at frequency " + std::to_string(k));
  const VectorXd lam = eig.eigenvalues();
  const MatrixXcd& q = eig.eigenvectors();

  const MatrixXcd carry =
      mat_view(st.csd_resid_snap[ki], st.n) - mat_view(st.csd_resid_dual[ki], st.n) +
      MatrixXcd::Identity(st.n, st.n);
  const MatrixXcd r0 = 0.5 * cfg.tau * mat_view(st.csd_snap[ki], st.n) +
                       0.5 * cfg.delta * (mat_view(st.csd_pd_snap[ki], st.n) -
                                          mat_view(st.csd_pd_dual[ki], st.n)) +
                       0.5 * cfg.rho * (carry * p.adjoint());
  const MatrixXcd g0 = q.adjoint() * r0;
  const MatrixXcd g1 = q.adjoint() * mat_view(st.target[ki], st.n);

  MatrixXcd scratch(st.n, st.n);
  const auto constraint_value = [&](double beta) {
    for (Eigen::Index r = 0; r < st.n; ++r)
      scratch.row(r) = (g0.row(r) + beta * g1.row(r)) / (lam[r] + beta);
    return (scratch - g1).squaredNorm();
  };

  double beta = 0.0;
  double value = constraint_value(0.0);
  if (value > cfg.eta) {
    double lo = 0.0, hi = 1.0;
    int doublings = 0;
    while (constraint_value(hi) > cfg.eta) {
      lo = hi;
      hi *= 2.0;
      require_numeric(++doublings < 200, "trust-constraint bracket failed at frequency " +
                                             std::to_string(k));
    }
    beta = hi;
    while (hi - lo > 1e-12) {
      const double mid = 0.5 * (lo + hi);
      value = constraint_value(mid);
      if (std::abs(value - cfg.eta) <= 1e-8 * cfg.eta) {
        beta = mid;
        break;
      }
      if (value > cfg.eta) {
        lo = mid;
      } else {
        hi = mid;
        beta = mid;
      }
    }
    if (constraint_value(beta) > cfg.eta + 1e-8) beta = hi;
  }

  for (Eigen::Index r = 0; r < st.n; ++r)
    scratch.row(r) = (g0.row(r) + beta * g1.row(r)) / (lam[r] + beta);
  const VectorXcd fresh = vec_of(q * scratch);
  st.csd[ki] = st.csd_snap[ki] + st.step * (fresh - st.csd_snap[ki]);
  st.trust_mult[ki] = beta;
}

void ia_update_csd_resid_split(IaState& st, Eigen::Index k) {
  const auto ki = static_cast<std::size_t>(k);
  const auto p = mat_view(st.prec_snap[ki], st.n);
  const VectorXcd arg = vec_of(mat_view(st.csd[ki], st.n) * p) - identity_vec(st.n) +
                        st.csd_resid_dual[ki];
  st.csd_resid[ki] = prox_linf(arg, 1.0 / st.cfg.rho);
}

void ia_update_csd_pd_split(IaState& st, Eigen::Index k) {
  const auto ki = static_cast<std::size_t>(k);
  const MatrixXcd l = mat_view(st.csd[ki], st.n) + mat_view(st.csd_pd_dual[ki], st.n);
  st.csd_pd[ki] = vec_of(project_hermitian_pd(l, st.cfg.epsilon));
}

void ia_update_group_split(IaState& st, Eigen::Index m) {
  require(m >= 0 && m < st.partition.blocks(), "block index out of range");
  const Eigen::Index lo = st.partition.block_begin(m);
  const Eigen::Index size = st.partition.block_size(m);
  const double shrink = st.cfg.lambda / st.cfg.theta;
  VectorXcd fiber(size);
  for (Eigen::Index c = 0; c < st.n * st.n; ++c) {
    if (!st.offdiag.keep[static_cast<std::size_t>(c)]) continue;  // diagonal fibers stay zero
    for (Eigen::Index r = 0; r < size; ++r) {
      const auto ki = static_cast<std::size_t>(lo + r);
      fiber[r] = st.prec[ki][c] + st.group_dual[ki][c];
    }
    const VectorXcd shrunk = shrink > 0 ? block_soft_threshold(fiber, shrink) : fiber;
    for (Eigen::Index r = 0; r < size; ++r)
      st.group[static_cast<std::size_t>(lo + r)][c] = shrunk[r];
  }
}

void ia_update_duals(IaState& st) {
  const VectorXcd eye = identity_vec(st.n);
  for (std::size_t k = 0; k < static_cast<std::size_t>(st.m); ++k) {
    const auto f = mat_view(st.csd_snap[k], st.n);
    const auto p = mat_view(st.prec_snap[k], st.n);
    st.prec_resid_dual[k] += vec_of(f * mat_view(st.prec[k], st.n)) - eye - st.prec_resid[k];
    st.prec_pd_dual[k] += st.prec[k] - st.prec_pd[k];
    st.csd_resid_dual[k] += vec_of(mat_view(st.csd[k], st.n) * p) - eye - st.csd_resid[k];
    st.csd_pd_dual[k] += st.csd[k] - st.csd_pd[k];
    st.group_dual[k] += masked(st.offdiag, st.prec[k]) - st.group[k];
  }
}

double ia_stepsize(long t, double prev, const IaConfig& cfg) {
  require(t >= 1, "stepsize needs t >= 1");
  const double td = static_cast<double>(t);
  const double numerator = prev + std::pow(std::log(td), cfg.c1);
  const double xi2 = cfg.pair == StepsizePair::LogOverT ? td : std::sqrt(td);
  return numerator / (1.0 + cfg.c2 * xi2);
}

ResidualReport ia_residual_report(const IaState& st) {
  const auto& cfg = st.cfg;
  const VectorXcd eye = identity_vec(st.n);
  const double root_mn = std::sqrt(static_cast<double>(st.m * st.n));

  double pi[6] = {0, 0, 0, 0, 0, 0};
  double dual[2] = {0, 0};
  // T-stack squared norms, numbered as in the stopping rules.
  double t1 = 0, t2 = 0, t3 = 0, t4 = 0, t5 = 0, t6 = 0, t7 = 0, t8 = 0;
  double t9 = 0, t10 = 0, t11 = 0, t12 = 0, t13 = 0, t14 = 0, t15 = 0, t16 = 0;

  for (std::size_t k = 0; k < static_cast<std::size_t>(st.m); ++k) {
    const auto f = mat_view(st.csd_snap[k], st.n);
    const auto p = mat_view(st.prec_snap[k], st.n);
    const VectorXcd fp = vec_of(f * mat_view(st.prec[k], st.n));
    const VectorXcd pf = vec_of(mat_view(st.csd[k], st.n) * p);
    const VectorXcd masked_prec = masked(st.offdiag, st.prec[k]);

    pi[0] += (fp - eye - st.prec_resid[k]).squaredNorm();
    pi[1] += (pf - eye - st.csd_resid[k]).squaredNorm();
    const double trust_gap = (st.csd[k] - st.target[k]).squaredNorm() - cfg.eta;
    pi[2] += trust_gap * trust_gap;
    pi[3] += (masked_prec - st.group[k]).squaredNorm();
    pi[4] += (st.prec[k] - st.prec_pd[k]).squaredNorm();
    pi[5] += (st.csd[k] - st.csd_pd[k]).squaredNorm();

    dual[0] += (cfg.omega * (st.prec_pd[k] - st.prec_pd_snap[k]) +
                cfg.sigma * vec_of(f.adjoint() *
                                   mat_view(st.prec_resid[k] - st.prec_resid_snap[k], st.n)) +
                cfg.theta * masked(st.offdiag, st.group[k] - st.group_snap[k]))
                   .squaredNorm();
    dual[1] += (0.5 * cfg.delta * (st.csd_pd[k] - st.csd_pd_snap[k]) +
                0.5 * cfg.rho *
                    vec_of(mat_view(st.csd_resid[k] - st.csd_resid_snap[k], st.n) * p.adjoint()))
                   .squaredNorm();

    t1 += fp.squaredNorm();
    t2 += st.prec_resid[k].squaredNorm();
    t3 += pf.squaredNorm();
    t4 += st.csd_resid[k].squaredNorm();
    t5 += (st.csd[k] - st.target[k]).squaredNorm();
    t6 += masked_prec.squaredNorm();
    t7 += st.group[k].squaredNorm();
    t8 += st.prec[k].squaredNorm();
    t9 += st.prec_pd[k].squaredNorm();
    t10 += st.csd[k].squaredNorm();
    t11 += st.csd_pd[k].squaredNorm();
    t12 += st.prec_pd_dual[k].squaredNorm();
    t13 += vec_of(f.adjoint() * mat_view(st.prec_resid_dual[k], st.n)).squaredNorm();
    t14 += masked(st.offdiag, st.group_dual[k]).squaredNorm();
    t15 += st.csd_pd_dual[k].squaredNorm();
    t16 += vec_of(mat_view(st.csd_resid_dual[k], st.n) * p.adjoint()).squaredNorm();
  }

  ResidualReport rep;
  rep.pi1 = std::sqrt(pi[0]);
  rep.pi2 = std::sqrt(pi[1]);
  rep.p3 = std::sqrt(pi[2]);
  rep.pi4 = std::sqrt(pi[3]);
  rep.pi5 = std::sqrt(pi[4]);
  rep.pi6 = std::sqrt(pi[5]);
  rep.d1 = std::sqrt(dual[0]);
  rep.d2 = std::sqrt(dual[1]);

  const double abs_p = static_cast<double>(st.n) * std::sqrt(static_cast<double>(st.m)) *
                       cfg.tol_abs_primal;
  const double abs_d = static_cast<double>(st.n) * std::sqrt(static_cast<double>(st.m)) *
                       cfg.tol_abs_dual;
  rep.thr_pi1 = abs_p + cfg.tol_rel_primal *
                            std::max({std::sqrt(t1), std::sqrt(t2), root_mn});
  rep.thr_pi2 = abs_p + cfg.tol_rel_primal *
                            std::max({std::sqrt(t3), std::sqrt(t4), root_mn});
  rep.thr_p3 = abs_p + cfg.tol_rel_primal *
                           std::max(std::sqrt(t5),
                                    cfg.eta * std::sqrt(static_cast<double>(st.m)));
  rep.thr_pi4 = abs_p + cfg.tol_rel_primal * std::max(std::sqrt(t6), std::sqrt(t7));
  rep.thr_pi5 = abs_p + cfg.tol_rel_primal * std::max(std::sqrt(t8), std::sqrt(t9));
  rep.thr_pi6 = abs_p + cfg.tol_rel_primal * std::max(std::sqrt(t10), std::sqrt(t11));
  rep.thr_d1 = abs_d + cfg.tol_rel_dual * std::max({cfg.omega * std::sqrt(t12),
                                                    cfg.sigma * std::sqrt(t13),
                                                    cfg.theta * std::sqrt(t14)});
  rep.thr_d2 = abs_d + 0.5 * cfg.tol_rel_dual *
                           std::max(cfg.delta * std::sqrt(t15), cfg.rho * std::sqrt(t16));

  rep.converged = rep.pi1 < rep.thr_pi1 && rep.pi2 < rep.thr_pi2 && rep.p3 < rep.thr_p3 &&
                  rep.pi4 < rep.thr_pi4 && rep.pi5 < rep.thr_pi5 && rep.pi6 < rep.thr_pi6 &&
                  rep.d1 < rep.thr_d1 && rep.d2 < rep.thr_d2;
  return rep;
}

ResidualReport ia_sweep(IaState& st, bool reverse) {
  ia_begin_sweep(st);
  const auto mm = static_cast<std::size_t>(st.m);
  const auto remap = [&](std::size_t i) {
    return reverse ? mm - 1 - i : i;
  };
  const auto prec_phase = [&](std::size_t i) {
    const auto k = static_cast<Eigen::Index>(remap(i));
    ia_update_prec(st, k);
    ia_update_prec_resid_split(st, k);
    ia_update_prec_pd_split(st, k);
  };
  const auto csd_phase = [&](std::size_t i) {
    const auto k = static_cast<Eigen::Index>(remap(i));
    ia_update_csd(st, k);
    ia_update_csd_resid_split(st, k);
    ia_update_csd_pd_split(st, k);
  };
  if (reverse) {
    for (std::size_t i = 0; i < mm; ++i) prec_phase(i);
    for (std::size_t i = 0; i < mm; ++i) csd_phase(i);
  } else {
    parallel_for(mm, prec_phase);
    parallel_for(mm, csd_phase);
  }
  const auto blocks = static_cast<std::size_t>(st.partition.blocks());
  parallel_for(blocks, [&](std::size_t m) {
    ia_update_group_split(st, static_cast<Eigen::Index>(m));
  });
  ia_update_duals(st);
  const ResidualReport rep = ia_residual_report(st);
  st.iter += 1;
  st.step = ia_stepsize(st.iter, st.step, st.cfg);
  return rep;
}

double ia_objective(const IaState& st) {
  double total = 0.0;
  for (std::size_t k = 0; k < static_cast<std::size_t>(st.m); ++k) {
    const MatrixXcd gap = mat_view(st.csd[k], st.n) * mat_view(st.prec[k], st.n) -
                          MatrixXcd::Identity(st.n, st.n);
    total += gap.cwiseAbs().maxCoeff();
  }
  for (Eigen::Index m = 0; m < st.partition.blocks(); ++m) {
    const Eigen::Index lo = st.partition.block_begin(m);
    const Eigen::Index size = st.partition.block_size(m);
    for (Eigen::Index c = 0; c < st.n * st.n; ++c) {
      if (!st.offdiag.keep[static_cast<std::size_t>(c)]) continue;
      double nsq = 0.0;
      for (Eigen::Index r = 0; r < size; ++r)
        nsq += std::norm(st.prec[static_cast<std::size_t>(lo + r)][c]);
      total += st.cfg.lambda * std::sqrt(nsq);
    }
  }
  return total;
}

IaResult ia_learn(const CsdTensor& smoothed, const FrequencyPartition& partition,
                  const IaConfig& cfg) {
  IaState st = ia_init(smoothed, partition, cfg);
  IaResult result;
  result.trace.reserve(static_cast<std::size_t>(cfg.max_iters));
  result.objective.reserve(static_cast<std::size_t>(cfg.max_iters));

  for (long it = 0; it < cfg.max_iters; ++it) {
    ResidualReport rep;
    try {
      rep = ia_sweep(st);
    } catch (const std::exception& e) {
      throw NumericalError("sweep aborted at iteration " + std::to_string(st.iter + 1) + ": " +
                           e.what());
    }
    require_numeric(std::isfinite(rep.pi1 + rep.pi2 + rep.p3 + rep.pi4 + rep.pi5 + rep.pi6 +
                                  rep.d1 + rep.d2),
                    "non-finite value detected at iteration " + std::to_string(st.iter));
    for (std::size_t k = 0; k < static_cast<std::size_t>(st.m); ++k)
      require_numeric((st.csd[k] - st.target[k]).squaredNorm() <= cfg.eta + 1e-8,
                      "trust constraint violated at iteration " + std::to_string(st.iter));
    result.trace.push_back(rep);
    result.objective.push_back(ia_objective(st));
    if (rep.converged) break;
  }
  result.iterations = st.iter;
  result.converged = !result.trace.empty() && result.trace.back().converged;

  result.prec.t = st.t_samples;
  result.prec.epsilon = cfg.epsilon;
  result.prec.pd_floor = true;
  result.prec.slices.resize(static_cast<std::size_t>(st.m));
  result.csd.t = st.t_samples;
  result.csd.slices.resize(static_cast<std::size_t>(st.m));
  for (std::size_t k = 0; k < static_cast<std::size_t>(st.m); ++k) {
    result.prec.slices[k] = hermitianize(mat_view(st.prec_pd[k], st.n));
    result.csd.slices[k] = hermitianize(mat_view(st.csd[k], st.n));
  }
  return result;
}

}  // namespace specgraph
