#include "specgraph/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "specgraph/fft.hpp"

namespace specgraph {

namespace {
constexpr double kPi = 3.14159265358979323846;

Eigen::Index next_pow2(Eigen::Index n) {
  Eigen::Index p = 1;
  while (p < n) p <<= 1;
  return p;
}
}  // namespace

void validate_window(const SmoothingWindow& window) {
  require(window.half_size >= 0, "half-window size must be nonnegative");
  require(window.weights.size() == 2 * window.half_size + 1,
          "window span must be 2*half_size+1");
  require((window.weights.array() >= 0).all(), "window weights must be nonnegative");
  require(std::abs(window.weights.sum() - 1.0) <= 1e-12, "window weights must sum to one");
  for (Eigen::Index j = 0; j < window.half_size; ++j)
    require(std::abs(window.weights[j] - window.weights[window.weights.size() - 1 - j]) <= 1e-12,
            "window weights must be symmetric");
}

TimeSeriesPanel center(const TimeSeriesPanel& panel) {
  TimeSeriesPanel out = panel;
  out.data.colwise() -= panel.data.rowwise().mean();
  return out;
}

AutocovarianceSequence sample_autocovariance(const TimeSeriesPanel& panel) {
  require(panel.t() >= 2, "autocovariance needs T >= 2");
  const Eigen::Index n = panel.n();
  const Eigen::Index t = panel.t();
  const MatrixXd centered = center(panel).data;

  // Linear cross-correlations of all row pairs through zero-padded FFTs.
  const Eigen::Index padded = next_pow2(2 * t);
  std::vector<VectorXcd> spectra(static_cast<std::size_t>(n));
  VectorXd buffer = VectorXd::Zero(padded);
  for (Eigen::Index i = 0; i < n; ++i) {
    buffer.head(t) = centered.row(i).transpose();
    spectra[static_cast<std::size_t>(i)] = fft::rfft(buffer);
  }

  AutocovarianceSequence acov;
  acov.t = t;
  acov.nonneg.assign(static_cast<std::size_t>(t), MatrixXd::Zero(n, n));
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i; j < n; ++j) {
      const VectorXcd cross = spectra[static_cast<std::size_t>(i)].cwiseProduct(
          spectra[static_cast<std::size_t>(j)].conjugate());
      const VectorXd corr = fft::irfft(cross, padded);
      // corr[l] = sum_t y_i[t+l] y_j[t]; corr[padded-l] covers the mirrored pair.
      acov.nonneg[0](i, j) = corr[0] / static_cast<double>(t);
      acov.nonneg[0](j, i) = acov.nonneg[0](i, j);
      for (Eigen::Index l = 1; l < t; ++l) {
        acov.nonneg[static_cast<std::size_t>(l)](i, j) = corr[l] / static_cast<double>(t);
        acov.nonneg[static_cast<std::size_t>(l)](j, i) =
            corr[padded - l] / static_cast<double>(t);
      }
    }
  return acov;
}

CsdTensor periodogram(const AutocovarianceSequence& acov) {
  const Eigen::Index t = acov.t;
  const Eigen::Index n = acov.n();
  const Eigen::Index m = slice_count_for(t);
  CsdTensor out;
  out.t = t;
  out.slices.assign(static_cast<std::size_t>(m), MatrixXcd::Zero(n, n));

  // e^{-i 2 pi k l / T} is T-periodic in l, so lags l and l-T share a DFT bin:
  // fold the 2T-1 lags onto g[r] = C_r + C_{r-T} and take one length-T DFT.
  VectorXd folded(t);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j <= i; ++j) {
      folded[0] = acov.nonneg[0](i, j);
      for (Eigen::Index r = 1; r < t; ++r)
        folded[r] = acov.nonneg[static_cast<std::size_t>(r)](i, j) +
                    acov.nonneg[static_cast<std::size_t>(t - r)](j, i);
      const VectorXcd spec = fft::rfft(folded);
      for (Eigen::Index k = 0; k < m; ++k) {
        if (i == j) {
          out.slices[static_cast<std::size_t>(k)](i, i) = Complex(spec[k].real(), 0.0);
        } else {
          out.slices[static_cast<std::size_t>(k)](i, j) = spec[k];
          out.slices[static_cast<std::size_t>(k)](j, i) = std::conj(spec[k]);
        }
      }
    }
  return out;
}

SmoothingWindow hanning_window(Eigen::Index half_size) {
  require(half_size >= 0, "half-window size must be nonnegative");
  SmoothingWindow window;
  window.half_size = half_size;
  window.weights.resize(2 * half_size + 1);
  for (Eigen::Index j = -half_size; j <= half_size; ++j) {
    const double c = std::cos(kPi * static_cast<double>(j) /
                              (2.0 * static_cast<double>(half_size) + 2.0));
    window.weights[j + half_size] = c * c;
  }
  window.weights /= window.weights.sum();
  return window;
}

Eigen::Index auto_half_window(Eigen::Index t) {
  return static_cast<Eigen::Index>(std::floor(std::sqrt(static_cast<double>(t))));
}

CsdTensor smooth_periodogram(const CsdTensor& raw, const SmoothingWindow& window) {
  validate_window(window);
  const Eigen::Index m = raw.m();
  require(2 * window.half_size + 1 <= m, "window span exceeds the number of frequencies");
  if (window.half_size == 0) return raw;

  const auto reflect = [m](Eigen::Index q) {
    if (q < 0) return -q;
    if (q > m - 1) return 2 * (m - 1) - q;
    return q;
  };
  CsdTensor out;
  out.t = raw.t;
  out.slices.assign(static_cast<std::size_t>(m), MatrixXcd::Zero(raw.n(), raw.n()));
  for (Eigen::Index k = 0; k < m; ++k) {
    auto& acc = out.slices[static_cast<std::size_t>(k)];
    for (Eigen::Index j = -window.half_size; j <= window.half_size; ++j)
      acc += window.weights[j + window.half_size] *
             raw.slices[static_cast<std::size_t>(reflect(k - j))];
  }
  return out;
}

InverseCsdTensor naive_inverse(const CsdTensor& smoothed) {
  const Eigen::Index n = smoothed.n();
  InverseCsdTensor out;
  out.t = smoothed.t;
  out.epsilon = 0.0;
  out.pd_floor = false;
  out.slices.resize(smoothed.slices.size());
  const MatrixXcd eye = MatrixXcd::Identity(n, n);
  for (Eigen::Index k = 0; k < smoothed.m(); ++k) {
    const MatrixXcd sym = hermitianize(smoothed.slices[static_cast<std::size_t>(k)]);
    Eigen::SelfAdjointEigenSolver<MatrixXcd> eig(sym);
    require_numeric(eig.info() == Eigen::Success,
                    "eigendecomposition failed at frequency " + std::to_string(k));
    const VectorXd mags = eig.eigenvalues().cwiseAbs();
    const double rcond = mags.minCoeff() / mags.maxCoeff();
    require_numeric(std::isfinite(rcond) && rcond >= 1e-13,
                    "near-singular slice at frequency " + std::to_string(k));
    MatrixXcd inv = eig.eigenvectors() * eig.eigenvalues().cwiseInverse().asDiagonal() *
                    eig.eigenvectors().adjoint();
    if ((sym * inv - eye).cwiseAbs().maxCoeff() > 1e-10)
      inv = inv * (2.0 * eye - sym * inv);  // one Newton refinement pass
    out.slices[static_cast<std::size_t>(k)] = hermitianize(inv);
  }
  return out;
}

CsdTensor partial_coherence(const InverseCsdTensor& inv) {
  const Eigen::Index n = inv.n();
  CsdTensor out;
  out.t = inv.t;
  out.slices.resize(inv.slices.size());
  VectorXd scale(n);
  for (Eigen::Index k = 0; k < inv.m(); ++k) {
    const auto& p = inv.slices[static_cast<std::size_t>(k)];
    for (Eigen::Index i = 0; i < n; ++i) {
      const double d = p(i, i).real();
      require_numeric(d > 0, "nonpositive diagonal entry (" + std::to_string(i) + ", " +
                                 std::to_string(k) + ") in inverse tensor");
      scale[i] = 1.0 / std::sqrt(d);
    }
    MatrixXcd r = -(scale.asDiagonal() * p * scale.asDiagonal());
    for (Eigen::Index i = 0; i < n; ++i) r(i, i) = Complex(-1.0, 0.0);
    out.slices[static_cast<std::size_t>(k)] = std::move(r);
  }
  return out;
}

CsdTensor smoothed_periodogram_of_panel(const TimeSeriesPanel& panel,
                                        const SmoothingWindow& window) {
  require(panel.t() >= 2, "periodogram needs T >= 2");
  const Eigen::Index n = panel.n();
  const Eigen::Index t = panel.t();
  const Eigen::Index m = slice_count_for(t);
  const MatrixXd centered = center(panel).data;

  // F_k = (1/T) d_k d_k^H with d_k the DFT of the centered rows; this equals
  // the DFT of the biased sample autocovariance exactly.
  std::vector<VectorXcd> spectra(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i)
    spectra[static_cast<std::size_t>(i)] = fft::rfft(centered.row(i).transpose());

  CsdTensor raw;
  raw.t = t;
  raw.slices.assign(static_cast<std::size_t>(m), MatrixXcd::Zero(n, n));
  for (Eigen::Index k = 0; k < m; ++k) {
    auto& slice = raw.slices[static_cast<std::size_t>(k)];
    for (Eigen::Index i = 0; i < n; ++i) {
      const Complex di = spectra[static_cast<std::size_t>(i)][k];
      slice(i, i) = Complex(std::norm(di) / static_cast<double>(t), 0.0);
      for (Eigen::Index j = 0; j < i; ++j) {
        const Complex v =
            di * std::conj(spectra[static_cast<std::size_t>(j)][k]) / static_cast<double>(t);
        slice(i, j) = v;
        slice(j, i) = std::conj(v);
      }
    }
  }
  return smooth_periodogram(raw, window);
}

}  // namespace specgraph
