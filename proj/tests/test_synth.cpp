#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "specgraph/evaluation.hpp"
#include "specgraph/spectral.hpp"
#include "specgraph/synth.hpp"

using namespace specgraph;

TEST_CASE("generate: same seed gives a bitwise-identical panel") {
  BandStructure structure;
  structure.n = 3;
  structure.bands.push_back({16, 40, {{0, 1, 0.9, 1}, {2, 1, 0.6, 0}}});
  const auto a = generate(structure, 256, 99);
  const auto b = generate(structure, 256, 99);
  CHECK((a.data - b.data).cwiseAbs().maxCoeff() == 0.0);
  const auto c = generate(structure, 256, 100);
  CHECK((a.data - c.data).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("generate: empty structure is independent white noise") {
  BandStructure structure;
  structure.n = 4;
  structure.bands.push_back({8, 64, {}});
  const auto panel = generate(structure, 2048, 5);
  CHECK(panel.n() == 4);
  CHECK(panel.t() == 2048);

  // with replicate averaging the naive coherence off-diagonals stay small
  const auto smoothed =
      average_smoothed_periodogram(structure, 512, 50, 5, hanning_window(22));
  const auto coherence = partial_coherence(naive_inverse(smoothed));
  double worst = 0.0;
  for (const auto& slice : coherence.slices)
    for (Eigen::Index j = 0; j < 4; ++j)
      for (Eigen::Index i = j + 1; i < 4; ++i)
        worst = std::max(worst, std::abs(slice(i, j)));
  CHECK(worst <= 0.1);
}

TEST_CASE("generate: structure validation errors") {
  BandStructure cyclic;
  cyclic.n = 3;
  cyclic.bands.push_back({0, 8, {{0, 1, 0.5, 0}, {1, 0, 0.5, 0}}});
  CHECK_THROWS_AS((void)generate(cyclic, 64, 1), ValidationError);

  BandStructure cross_cycle;  // acyclic per band, cyclic in the union
  cross_cycle.n = 2;
  cross_cycle.bands.push_back({0, 8, {{0, 1, 0.5, 0}}});
  cross_cycle.bands.push_back({8, 16, {{1, 0, 0.5, 0}}});
  CHECK_THROWS_AS((void)generate(cross_cycle, 64, 1), ValidationError);

  BandStructure bad_edge;
  bad_edge.n = 3;
  bad_edge.bands.push_back({0, 8, {{0, 3, 0.5, 0}}});
  CHECK_THROWS_AS(validate_structure(bad_edge, 64), ValidationError);

  BandStructure self_loop;
  self_loop.n = 3;
  self_loop.bands.push_back({0, 8, {{1, 1, 0.5, 0}}});
  CHECK_THROWS_AS(validate_structure(self_loop, 64), ValidationError);

  BandStructure bad_band;
  bad_band.n = 3;
  bad_band.bands.push_back({8, 8, {}});
  CHECK_THROWS_AS(validate_structure(bad_band, 64), ValidationError);
}

TEST_CASE("bandpass_taps: symmetric, in-band passes, out-of-band blocked") {
  const Eigen::Index t = 1024;
  const VectorXd taps = bandpass_taps(128, 256, t);
  for (Eigen::Index i = 0; i < taps.size() / 2; ++i)
    CHECK(taps[i] == doctest::Approx(taps[taps.size() - 1 - i]).epsilon(1e-12));

  const auto gain = [&](double nu) {
    Complex acc(0, 0);
    const Eigen::Index half = (taps.size() - 1) / 2;
    for (Eigen::Index i = 0; i < taps.size(); ++i) {
      const double angle = -2.0 * 3.14159265358979323846 * nu * static_cast<double>(i - half);
      acc += taps[i] * Complex(std::cos(angle), std::sin(angle));
    }
    return std::abs(acc);
  };
  CHECK(gain(192.0 / 1024.0) >= 0.95);  // mid-band
  CHECK(gain(64.0 / 1024.0) <= 0.01);   // far below
  CHECK(gain(400.0 / 1024.0) <= 0.01);  // far above
  // transition stays within 10% of the band width
  const double width = 128.0 / 1024.0;
  CHECK(gain(128.0 / 1024.0 + 0.1 * width) >= 0.9);
  CHECK(gain(128.0 / 1024.0 - 0.1 * width) <= 0.1);
}

TEST_CASE("ground_truth_kpcg: chain, collider, empty structure") {
  const auto partition = make_partition({0, 8}, 16);

  BandStructure chain;
  chain.n = 3;
  chain.bands.push_back({8, 16, {{0, 1, 0.5, 1}, {1, 2, 0.5, 1}}});
  const auto chain_truth = ground_truth_kpcg(chain, partition);
  CHECK(chain_truth.layers[0].empty());
  CHECK(chain_truth.layers[1].size() == 2);
  CHECK(chain_truth.has_edge(1, 0, 1));
  CHECK(chain_truth.has_edge(1, 1, 2));
  CHECK(!chain_truth.has_edge(1, 0, 2));  // no moral edge across the chain

  BandStructure collider;
  collider.n = 3;
  collider.bands.push_back({0, 8, {{0, 1, 0.5, 1}, {2, 1, 0.5, 1}}});
  const auto collider_truth = ground_truth_kpcg(collider, partition);
  CHECK(collider_truth.layers[0].size() == 3);
  CHECK(collider_truth.has_edge(0, 0, 1));
  CHECK(collider_truth.has_edge(0, 2, 1));
  CHECK(collider_truth.has_edge(0, 0, 2));  // co-parents become adjacent

  BandStructure empty;
  empty.n = 3;
  const auto empty_truth = ground_truth_kpcg(empty, partition);
  for (const auto& layer : empty_truth.layers) CHECK(layer.empty());
}

TEST_CASE("reference structure: shape and truth cardinalities") {
  const auto structure = reference_structure();
  CHECK(structure.n == 6);
  validate_structure(structure, 1024);
  const auto truth = ground_truth_kpcg(structure, equal_partition(8, 513));
  const std::size_t expect[8] = {0, 0, 5, 5, 4, 4, 4, 4};
  for (int m = 0; m < 8; ++m) CHECK(truth.layers[static_cast<std::size_t>(m)].size() == expect[m]);
}

TEST_CASE("single-band edge shows up in its band and not in far blocks") {
  // Scaled-down pipeline oracle: T=256, one edge confined to blocks 3-4 of 4.
  BandStructure structure;
  structure.n = 3;
  structure.bands.push_back({64, 129, {{0, 1, 0.9, 1}}});
  const Eigen::Index t = 256;
  const auto partition = equal_partition(4, slice_count_for(t));

  const auto smoothed =
      average_smoothed_periodogram(structure, t, 200, 7, hanning_window(auto_half_window(t)));
  const auto inverse = naive_inverse(smoothed);
  const auto coherence = partial_coherence(inverse);

  const auto fiber_norm = [&](Eigen::Index m) {
    double nsq = 0.0;
    for (Eigen::Index k = partition.block_begin(m); k < partition.block_end(m); ++k)
      nsq += std::norm(coherence.slices[static_cast<std::size_t>(k)](1, 0));
    return std::sqrt(nsq);
  };
  const double in_band = std::min(fiber_norm(2), fiber_norm(3));
  CHECK(fiber_norm(0) <= 0.1 * in_band);  // non-adjacent block leakage bound

  const auto extraction = extract_kpcg(inverse, partition, 0.05, Normalization::Global);
  CHECK(extraction.graph.has_edge(2, 1, 0));
  CHECK(extraction.graph.has_edge(3, 1, 0));
  CHECK(!extraction.graph.has_edge(0, 1, 0));
}
