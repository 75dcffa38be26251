#pragma once

#include <cstdint>

#include "specgraph/graph.hpp"
#include "specgraph/types.hpp"

namespace specgraph {

/// Band-limited causal structure. Each band holds a DAG of lagged linear
/// effects confined to the frequency indices [start_k, end_k) of the length-T
/// grid (k in 0..T/2). The union of all band edges must also be acyclic so
/// signals can be generated in one topological pass.
struct BandStructure {
  struct Edge {
    Eigen::Index from, to;
    double coef;
    Eigen::Index lag;
  };
  struct Band {
    Eigen::Index start_k, end_k;
    std::vector<Edge> edges;
  };
  Eigen::Index n = 0;
  std::vector<Band> bands;
};

void validate_structure(const BandStructure& structure, Eigen::Index t);

/// Symmetric windowed-sinc bandpass taps for band [start_k, end_k) of a
/// length-t frequency grid. The passband is inset by the transition width so
/// leakage outside the band sits at stopband level; the transition width is
/// at most 10% of the band width.
VectorXd bandpass_taps(Eigen::Index start_k, Eigen::Index end_k, Eigen::Index t);

/// Draws unit-variance white innovations per node and adds, for every band
/// edge, the parent's *signal* bandpass-filtered (zero-phase), lagged and
/// scaled, in topological order. The induced inverse CSD is block-sparse with
/// exactly the per-band moralization support. Deterministic given the seed.
TimeSeriesPanel generate(const BandStructure& structure, Eigen::Index t, std::uint64_t seed);

/// True K-PCG: per band, parent-child pairs plus pairs sharing a child
/// (moralization), placed in every partition block overlapping that band.
Kpcg ground_truth_kpcg(const BandStructure& structure, const FrequencyPartition& partition);

/// The two-band N=6, T=1024 benchmark structure used throughout the tests:
/// a slow band on k in [128,256) and a fast band on k in [256,513).
BandStructure reference_structure();

}  // namespace specgraph
