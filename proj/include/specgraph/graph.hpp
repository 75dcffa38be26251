#pragma once

#include "specgraph/types.hpp"

namespace specgraph {

/// K-layer undirected graph over [N]. Pairs are stored with i > j (0-based);
/// weights are the normalized coherence scores in [0, 1].
struct Kpcg {
  struct Edge {
    Eigen::Index i, j;
    double weight;
  };
  Eigen::Index n = 0;
  std::vector<std::vector<Edge>> layers;

  Eigen::Index k() const { return static_cast<Eigen::Index>(layers.size()); }
  bool has_edge(Eigen::Index layer, Eigen::Index i, Eigen::Index j) const;
};

enum class Normalization {
  PerBlock,  // min-max over the N(N-1)/2 pair scores within each block
  Global,    // min-max over all (block, pair) scores at once
};

struct ExtractionResult {
  Kpcg graph;
  // Blocks whose scores were all equal (normalization undefined): their
  // scores are forced to zero and no edges are emitted.
  std::vector<Eigen::Index> degenerate_blocks;
};

/// Definition-1 extraction: partial coherence, per-(block, pair) fiber l2
/// scores, min-max normalization, and a strict threshold r_bar.
ExtractionResult extract_kpcg(const InverseCsdTensor& inv, const FrequencyPartition& partition,
                              double r_bar, Normalization mode = Normalization::PerBlock);

/// Structural Hamming distance: summed symmetric-difference cardinality of
/// the layer edge sets.
long shd(const Kpcg& estimated, const Kpcg& truth);

}  // namespace specgraph
