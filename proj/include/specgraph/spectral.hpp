#pragma once

#include "specgraph/types.hpp"

namespace specgraph {

/// Sample autocovariance of a centered panel. Matrices are stored for lags
/// 0..T-1; negative lags are the transposes, exact by construction.
struct AutocovarianceSequence {
  Eigen::Index t = 0;
  std::vector<MatrixXd> nonneg;  // index l holds the lag-l matrix

  Eigen::Index n() const { return nonneg.empty() ? 0 : nonneg.front().rows(); }
  MatrixXd at(Eigen::Index lag) const {
    const Eigen::Index a = lag < 0 ? -lag : lag;
    require(a < t, "lag out of range");
    const auto& m = nonneg[static_cast<std::size_t>(a)];
    return lag < 0 ? m.transpose() : m;
  }
};

/// Symmetric nonnegative weights of span 2*half_size + 1 summing to one.
struct SmoothingWindow {
  Eigen::Index half_size = 0;
  VectorXd weights;  // length 2*half_size + 1, center at index half_size
};

void validate_window(const SmoothingWindow& window);

/// Subtracts each row's sample mean.
TimeSeriesPanel center(const TimeSeriesPanel& panel);

/// C_l = (1/T) sum_{t=0}^{T-|l|-1} (y[t+l]-ybar)(y[t]-ybar)^T. Centering is
/// applied internally; computed by FFT-based cross-correlation.
AutocovarianceSequence sample_autocovariance(const TimeSeriesPanel& panel);

/// Periodogram as the DFT of the sample autocovariance:
/// [F_k]_{ij} = sum_{l=-T+1}^{T-1} [C_l]_{ij} e^{-i 2 pi k l / T}, k = 0..T/2.
CsdTensor periodogram(const AutocovarianceSequence& acov);

/// Hanning weights cos^2(pi j / (2 half + 2)), j = -half..half, normalized;
/// strictly positive at every tap.
SmoothingWindow hanning_window(Eigen::Index half_size);

/// Half-window size floor(sqrt(T)) used by the "auto" CLI setting.
Eigen::Index auto_half_window(Eigen::Index t);

/// Entrywise convolution along the frequency axis with the axis reflected at
/// k=0 and k=M-1 (even extension); requires 2*half+1 <= M.
CsdTensor smooth_periodogram(const CsdTensor& raw, const SmoothingWindow& window);

/// Slice-wise inverse of the smoothed periodogram. Carries no PD floor.
/// A slice with reciprocal condition below 1e-13 raises a NumericalError
/// naming the frequency index.
InverseCsdTensor naive_inverse(const CsdTensor& smoothed);

/// R_k = -D_k P_k D_k with D_k = diag([P_k]_{ii}^{-1/2}); unit self-coherence
/// ([R_k]_{ii} = -1 exactly). Errors name (i, k) on a nonpositive diagonal.
CsdTensor partial_coherence(const InverseCsdTensor& inv);

/// smooth_periodogram(periodogram(sample_autocovariance(center(panel)))),
/// fused through one real FFT per series (identical result, fewer flops).
CsdTensor smoothed_periodogram_of_panel(const TimeSeriesPanel& panel,
                                        const SmoothingWindow& window);

}  // namespace specgraph
