#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <vector>

#include "specgraph/errors.hpp"

namespace specgraph {

using Complex = std::complex<double>;
using MatrixXcd = Eigen::MatrixXcd;
using MatrixXd = Eigen::MatrixXd;
using VectorXcd = Eigen::VectorXcd;
using VectorXd = Eigen::VectorXd;

/// N real-valued series of T samples each (one series per row).
struct TimeSeriesPanel {
  MatrixXd data;  // N x T
  std::optional<double> sample_rate;  // Hz, metadata only

  Eigen::Index n() const { return data.rows(); }
  Eigen::Index t() const { return data.cols(); }
};

void validate_panel(const TimeSeriesPanel& panel);

/// M Hermitian N x N slices, one per rescaled frequency nu_k = k/T,
/// k in {0, ..., floor(T/2)}; M = floor(T/2) + 1.
struct CsdTensor {
  Eigen::Index t = 0;  // original sample count
  std::vector<MatrixXcd> slices;

  Eigen::Index n() const { return slices.empty() ? 0 : slices.front().rows(); }
  Eigen::Index m() const { return static_cast<Eigen::Index>(slices.size()); }
};

/// Same shape as CsdTensor. `epsilon` is the positive-definiteness floor of
/// the learner that produced it; `pd_floor` is false for the naive inverse,
/// which carries no such guarantee.
struct InverseCsdTensor {
  Eigen::Index t = 0;
  std::vector<MatrixXcd> slices;
  double epsilon = 0.0;
  bool pd_floor = false;

  Eigen::Index n() const { return slices.empty() ? 0 : slices.front().rows(); }
  Eigen::Index m() const { return static_cast<Eigen::Index>(slices.size()); }
};

inline Eigen::Index slice_count_for(Eigen::Index t) { return t / 2 + 1; }

bool is_hermitian(const MatrixXcd& a, double rel_tol = 1e-10);
MatrixXcd hermitianize(const MatrixXcd& a);

void validate_csd(const CsdTensor& tensor);
void validate_inverse(const InverseCsdTensor& tensor);

/// K contiguous frequency blocks covering {0, ..., M-1}. `starts` is strictly
/// increasing with starts[0] == 0; block m is [starts[m], starts[m+1]) and the
/// last block ends at M-1.
struct FrequencyPartition {
  std::vector<Eigen::Index> starts;
  Eigen::Index total;  // M

  Eigen::Index blocks() const { return static_cast<Eigen::Index>(starts.size()); }
  Eigen::Index block_begin(Eigen::Index m) const { return starts[static_cast<std::size_t>(m)]; }
  Eigen::Index block_end(Eigen::Index m) const {
    return m + 1 < blocks() ? starts[static_cast<std::size_t>(m) + 1] : total;
  }
  Eigen::Index block_size(Eigen::Index m) const { return block_end(m) - block_begin(m); }
};

FrequencyPartition make_partition(std::vector<Eigen::Index> starts, Eigen::Index total);
FrequencyPartition equal_partition(Eigen::Index blocks, Eigen::Index total);

/// Which fiber columns of a flattening are retained.
enum class MaskKind {
  StrictLower,  // S1: positions (i, j) with i > j, N(N-1)/2 of them
  OffDiagonal,  // S2: positions (i, j) with i != j, N(N-1) of them
};

struct SelectionMask {
  MaskKind kind;
  Eigen::Index n;
  std::vector<bool> keep;  // length N^2, column-major over (i, j)
};

SelectionMask make_mask(MaskKind kind, Eigen::Index n);

/// Column-major fiber-column index of entry (i, j), both 0-based. This single
/// convention is shared by every module; it matches Eigen's vec layout.
inline Eigen::Index fiber_column(Eigen::Index i, Eigen::Index j, Eigen::Index n) {
  return i + n * j;
}

/// Flattening of one frequency block: row r holds vec(P_{k_m + r}), so column
/// i + N*j carries the (i, j) fiber across the block's frequencies.
struct BlockFlattening {
  Eigen::Index n = 0;
  Eigen::Index start_k = 0;
  MatrixXcd values;  // |K_m| x N^2
};

BlockFlattening flatten_block(const InverseCsdTensor& tensor, const FrequencyPartition& partition,
                              Eigen::Index m);
std::vector<MatrixXcd> unflatten_block(const BlockFlattening& flat);
BlockFlattening apply_mask(const BlockFlattening& flat, const SelectionMask& mask);

}  // namespace specgraph
