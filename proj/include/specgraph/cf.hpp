#pragma once

#include "specgraph/types.hpp"

namespace specgraph {

/// Number of retained strictly-lower fiber columns per frequency block.
struct SparsityBudget {
  std::vector<Eigen::Index> s;
};

void validate_budget(const SparsityBudget& budget, const FrequencyPartition& partition,
                     Eigen::Index n);

/// Best s_m-block-sparse approximation of the naive inverse, per block:
/// keep the top-s_m strictly-lower fiber columns by l2 norm across the block,
/// copy the diagonal fibers, fill the upper fibers with conjugates. Ties at
/// the budget boundary keep the smaller (i, j) pair.
InverseCsdTensor cf_learn(const InverseCsdTensor& naive, const FrequencyPartition& partition,
                          const SparsityBudget& budget);

/// Squared Frobenius distance over the mask-retained columns only.
double cf_objective(const BlockFlattening& naive_flat, const BlockFlattening& estimate_flat,
                    const SelectionMask& mask);

}  // namespace specgraph
