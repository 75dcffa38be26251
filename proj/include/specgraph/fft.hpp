#pragma once

#include "specgraph/types.hpp"

namespace specgraph::fft {

/// Forward real DFT: out[k] = sum_t in[t] e^{-i 2 pi k t / n}, k = 0..n/2.
VectorXcd rfft(const VectorXd& in);

/// Inverse of rfft with 1/n scaling; `n` is the real length to reconstruct.
VectorXd irfft(const VectorXcd& spectrum, Eigen::Index n);

}  // namespace specgraph::fft
