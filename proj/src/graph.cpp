#include "specgraph/graph.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "specgraph/spectral.hpp"

namespace specgraph {

bool Kpcg::has_edge(Eigen::Index layer, Eigen::Index i, Eigen::Index j) const {
  if (i < j) std::swap(i, j);
  const auto& edges = layers[static_cast<std::size_t>(layer)];
  return std::any_of(edges.begin(), edges.end(),
                     [&](const Edge& e) { return e.i == i && e.j == j; });
}

ExtractionResult extract_kpcg(const InverseCsdTensor& inv, const FrequencyPartition& partition,
                              double r_bar, Normalization mode) {
  require(r_bar >= 0 && r_bar < 1, "threshold must lie in [0, 1)");
  require(partition.total == inv.m(), "partition does not match tensor length");
  const Eigen::Index n = inv.n();
  const Eigen::Index blocks = partition.blocks();
  const CsdTensor coherence = partial_coherence(inv);

  // Fiber l2 score per (block, unordered pair).
  std::vector<MatrixXd> scores(static_cast<std::size_t>(blocks));
  for (Eigen::Index m = 0; m < blocks; ++m) {
    MatrixXd block_scores = MatrixXd::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index i = j + 1; i < n; ++i) {
        double nsq = 0.0;
        for (Eigen::Index k = partition.block_begin(m); k < partition.block_end(m); ++k)
          nsq += std::norm(coherence.slices[static_cast<std::size_t>(k)](i, j));
        block_scores(i, j) = std::sqrt(nsq);
      }
    scores[static_cast<std::size_t>(m)] = std::move(block_scores);
  }

  ExtractionResult result;
  result.graph.n = n;
  result.graph.layers.assign(static_cast<std::size_t>(blocks), {});

  const auto minmax_of = [&](Eigen::Index first, Eigen::Index last) {
    double lo = scores[static_cast<std::size_t>(first)].coeff(1, 0);
    double hi = lo;
    for (Eigen::Index m = first; m <= last; ++m)
      for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = j + 1; i < n; ++i) {
          lo = std::min(lo, scores[static_cast<std::size_t>(m)](i, j));
          hi = std::max(hi, scores[static_cast<std::size_t>(m)](i, j));
        }
    return std::pair<double, double>(lo, hi);
  };

  const auto emit = [&](Eigen::Index m, double lo, double hi) {
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index i = j + 1; i < n; ++i) {
        const double w = (scores[static_cast<std::size_t>(m)](i, j) - lo) / (hi - lo);
        if (w > r_bar)
          result.graph.layers[static_cast<std::size_t>(m)].push_back({i, j, w});
      }
  };

  if (mode == Normalization::Global) {
    const auto [lo, hi] = minmax_of(0, blocks - 1);
    if (hi == lo) {
      for (Eigen::Index m = 0; m < blocks; ++m) result.degenerate_blocks.push_back(m);
      return result;
    }
    for (Eigen::Index m = 0; m < blocks; ++m) emit(m, lo, hi);
    return result;
  }
  for (Eigen::Index m = 0; m < blocks; ++m) {
    const auto [lo, hi] = minmax_of(m, m);
    if (hi == lo) {
      result.degenerate_blocks.push_back(m);
      continue;
    }
    emit(m, lo, hi);
  }
  return result;
}

long shd(const Kpcg& estimated, const Kpcg& truth) {
  require(estimated.n == truth.n, "graphs have different node counts");
  require(estimated.k() == truth.k(), "graphs have different layer counts");
  long total = 0;
  for (std::size_t m = 0; m < estimated.layers.size(); ++m) {
    std::set<std::pair<Eigen::Index, Eigen::Index>> a, b;
    for (const auto& e : estimated.layers[m]) a.emplace(std::max(e.i, e.j), std::min(e.i, e.j));
    for (const auto& e : truth.layers[m]) b.emplace(std::max(e.i, e.j), std::min(e.i, e.j));
    for (const auto& e : a)
      if (!b.count(e)) ++total;
    for (const auto& e : b)
      if (!a.count(e)) ++total;
  }
  return total;
}

}  // namespace specgraph
