#include "specgraph/cf.hpp"

#include <algorithm>
#include <tuple>
#include <vector>

namespace specgraph {

void validate_budget(const SparsityBudget& budget, const FrequencyPartition& partition,
                     Eigen::Index n) {
  require(static_cast<Eigen::Index>(budget.s.size()) == partition.blocks(),
          "budget length must match the number of blocks");
  const Eigen::Index max_pairs = n * (n - 1) / 2;
  for (const Eigen::Index s : budget.s)
    require(s >= 0 && s <= max_pairs, "each budget must lie in [0, N(N-1)/2]");
}

InverseCsdTensor cf_learn(const InverseCsdTensor& naive, const FrequencyPartition& partition,
                          const SparsityBudget& budget) {
  const Eigen::Index n = naive.n();
  require(partition.total == naive.m(), "partition does not match tensor length");
  validate_budget(budget, partition, n);

  InverseCsdTensor out;
  out.t = naive.t;
  out.epsilon = naive.epsilon;
  out.pd_floor = false;
  out.slices.assign(naive.slices.size(), MatrixXcd::Zero(n, n));
  for (std::size_t k = 0; k < naive.slices.size(); ++k)
    out.slices[k].diagonal() = naive.slices[k].diagonal();

  struct Scored {
    double norm_sq;
    Eigen::Index i, j;
  };
  for (Eigen::Index m = 0; m < partition.blocks(); ++m) {
    const Eigen::Index lo = partition.block_begin(m);
    const Eigen::Index hi = partition.block_end(m);
    std::vector<Scored> scores;
    scores.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index i = j + 1; i < n; ++i) {
        double nsq = 0.0;
        for (Eigen::Index k = lo; k < hi; ++k)
          nsq += std::norm(naive.slices[static_cast<std::size_t>(k)](i, j));
        scores.push_back({nsq, i, j});
      }
    std::sort(scores.begin(), scores.end(), [](const Scored& a, const Scored& b) {
      if (a.norm_sq != b.norm_sq) return a.norm_sq > b.norm_sq;
      return std::tie(a.i, a.j) < std::tie(b.i, b.j);
    });
    const auto keep = static_cast<std::size_t>(budget.s[static_cast<std::size_t>(m)]);
    for (std::size_t r = 0; r < keep && r < scores.size(); ++r) {
      const auto [nsq, i, j] = scores[r];
      (void)nsq;
      for (Eigen::Index k = lo; k < hi; ++k) {
        const Complex v = naive.slices[static_cast<std::size_t>(k)](i, j);
        out.slices[static_cast<std::size_t>(k)](i, j) = v;
        out.slices[static_cast<std::size_t>(k)](j, i) = std::conj(v);
      }
    }
  }
  return out;
}

double cf_objective(const BlockFlattening& naive_flat, const BlockFlattening& estimate_flat,
                    const SelectionMask& mask) {
  require(naive_flat.n == estimate_flat.n &&
              naive_flat.values.rows() == estimate_flat.values.rows(),
          "flattening shapes do not match");
  require(mask.n == naive_flat.n, "mask dimension does not match flattening");
  double total = 0.0;
  for (Eigen::Index c = 0; c < naive_flat.values.cols(); ++c) {
    if (!mask.keep[static_cast<std::size_t>(c)]) continue;
    total += (naive_flat.values.col(c) - estimate_flat.values.col(c)).squaredNorm();
  }
  return total;
}

}  // namespace specgraph
