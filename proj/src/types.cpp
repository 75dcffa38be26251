#include "specgraph/types.hpp"

#include <algorithm>
#include <cmath>

namespace specgraph {

void validate_panel(const TimeSeriesPanel& panel) {
  require(panel.n() >= 2, "panel needs at least 2 series");
  require(panel.t() >= 4, "panel needs at least 4 samples");
  if (panel.sample_rate) require(*panel.sample_rate > 0, "sample_rate must be positive");
  require(panel.data.allFinite(), "panel contains non-finite values");
}

bool is_hermitian(const MatrixXcd& a, double rel_tol) {
  if (a.rows() != a.cols()) return false;
  const double scale = a.cwiseAbs().maxCoeff();
  const double gap = (a - a.adjoint()).cwiseAbs().maxCoeff();
  return gap <= rel_tol * std::max(scale, 1e-300);
}

MatrixXcd hermitianize(const MatrixXcd& a) { return 0.5 * (a + a.adjoint()); }

void validate_csd(const CsdTensor& tensor) {
  require(!tensor.slices.empty(), "tensor has no slices");
  require(tensor.m() == slice_count_for(tensor.t),
          "slice count must equal floor(T/2)+1 for the stored T");
  const Eigen::Index n = tensor.n();
  for (Eigen::Index k = 0; k < tensor.m(); ++k) {
    const auto& s = tensor.slices[static_cast<std::size_t>(k)];
    require(s.rows() == n && s.cols() == n, "tensor slices must share one square shape");
    require(is_hermitian(s), "tensor slice " + std::to_string(k) + " is not Hermitian");
  }
}

void validate_inverse(const InverseCsdTensor& tensor) {
  CsdTensor view{tensor.t, tensor.slices};
  validate_csd(view);
  if (tensor.pd_floor) require(tensor.epsilon > 0, "PD floor requires positive epsilon");
}

FrequencyPartition make_partition(std::vector<Eigen::Index> starts, Eigen::Index total) {
  require(!starts.empty(), "partition needs at least one block");
  require(starts.front() == 0, "first block must start at frequency 0");
  require(static_cast<Eigen::Index>(starts.size()) < total, "partition needs K < M");
  for (std::size_t i = 1; i < starts.size(); ++i)
    require(starts[i] > starts[i - 1], "block starts must be strictly increasing");
  require(starts.back() <= total - 1, "last block start exceeds M-1");
  return FrequencyPartition{std::move(starts), total};
}

FrequencyPartition equal_partition(Eigen::Index blocks, Eigen::Index total) {
  require(blocks > 0 && blocks < total, "need 0 < K < M");
  std::vector<Eigen::Index> starts(static_cast<std::size_t>(blocks));
  for (Eigen::Index m = 0; m < blocks; ++m)
    starts[static_cast<std::size_t>(m)] = m * (total / blocks);
  return make_partition(std::move(starts), total);
}

SelectionMask make_mask(MaskKind kind, Eigen::Index n) {
  require(n >= 1, "mask needs n >= 1");
  SelectionMask mask{kind, n, std::vector<bool>(static_cast<std::size_t>(n * n), false)};
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) {
      const bool keep = kind == MaskKind::StrictLower ? i > j : i != j;
      mask.keep[static_cast<std::size_t>(fiber_column(i, j, n))] = keep;
    }
  return mask;
}

BlockFlattening flatten_block(const InverseCsdTensor& tensor, const FrequencyPartition& partition,
                              Eigen::Index m) {
  require(m >= 0 && m < partition.blocks(), "block index out of range");
  require(partition.total == tensor.m(), "partition does not match tensor length");
  const Eigen::Index n = tensor.n();
  const Eigen::Index lo = partition.block_begin(m);
  const Eigen::Index size = partition.block_size(m);
  BlockFlattening flat{n, lo, MatrixXcd(size, n * n)};
  for (Eigen::Index r = 0; r < size; ++r) {
    const auto& slice = tensor.slices[static_cast<std::size_t>(lo + r)];
    flat.values.row(r) = Eigen::Map<const VectorXcd>(slice.data(), n * n).transpose();
  }
  return flat;
}

std::vector<MatrixXcd> unflatten_block(const BlockFlattening& flat) {
  const Eigen::Index n = flat.n;
  std::vector<MatrixXcd> slices;
  slices.reserve(static_cast<std::size_t>(flat.values.rows()));
  for (Eigen::Index r = 0; r < flat.values.rows(); ++r) {
    const VectorXcd row = flat.values.row(r).transpose();
    slices.emplace_back(Eigen::Map<const MatrixXcd>(row.data(), n, n));
  }
  return slices;
}

BlockFlattening apply_mask(const BlockFlattening& flat, const SelectionMask& mask) {
  require(mask.n == flat.n, "mask dimension does not match flattening");
  BlockFlattening out = flat;
  for (Eigen::Index c = 0; c < out.values.cols(); ++c)
    if (!mask.keep[static_cast<std::size_t>(c)]) out.values.col(c).setZero();
  return out;
}

}  // namespace specgraph
