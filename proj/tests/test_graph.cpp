#include <doctest.h>

#include "oracles.hpp"
#include "specgraph/graph.hpp"

using namespace specgraph;

namespace {
InverseCsdTensor diagonal_tensor(Eigen::Index n, Eigen::Index m, Eigen::Index t) {
  InverseCsdTensor tensor;
  tensor.t = t;
  tensor.slices.assign(static_cast<std::size_t>(m), MatrixXcd::Identity(n, n));
  return tensor;
}

void set_pair(MatrixXcd& s, Eigen::Index i, Eigen::Index j, Complex v) {
  s(i, j) = v;
  s(j, i) = std::conj(v);
}

Kpcg graph_with(Eigen::Index n, std::vector<std::vector<std::pair<int, int>>> layers) {
  Kpcg g;
  g.n = n;
  for (auto& layer : layers) {
    std::vector<Kpcg::Edge> edges;
    for (auto [i, j] : layer)
      edges.push_back({std::max<Eigen::Index>(i, j), std::min<Eigen::Index>(i, j), 1.0});
    g.layers.push_back(std::move(edges));
  }
  return g;
}
}  // namespace

TEST_CASE("extract_kpcg: diagonal tensor gives empty layers with a degeneracy record") {
  const auto tensor = diagonal_tensor(4, 6, 10);
  const auto partition = make_partition({0, 3}, 6);
  const auto result = extract_kpcg(tensor, partition, 0.05);
  for (const auto& layer : result.graph.layers) CHECK(layer.empty());
  CHECK(result.degenerate_blocks.size() == 2);  // all scores exactly zero
}

TEST_CASE("extract_kpcg: one strong pair per block maps to weight 1") {
  auto tensor = diagonal_tensor(3, 4, 8);
  set_pair(tensor.slices[0], 1, 0, Complex(0.5, 0));
  set_pair(tensor.slices[1], 1, 0, Complex(0.5, 0));
  set_pair(tensor.slices[2], 2, 1, Complex(0, 0.4));
  set_pair(tensor.slices[3], 2, 1, Complex(0, 0.4));
  const auto partition = make_partition({0, 2}, 4);
  const auto result = extract_kpcg(tensor, partition, 0.05);
  REQUIRE(result.graph.layers[0].size() == 1);
  REQUIRE(result.graph.layers[1].size() == 1);
  CHECK(result.graph.layers[0][0].i == 1);
  CHECK(result.graph.layers[0][0].j == 0);
  CHECK(result.graph.layers[0][0].weight == doctest::Approx(1.0));
  CHECK(result.graph.layers[1][0].i == 2);
  CHECK(result.graph.layers[1][0].j == 1);
  CHECK(result.graph.layers[1][0].weight == doctest::Approx(1.0));
}

TEST_CASE("extract_kpcg: min-max arithmetic on three scores") {
  // One block; fiber norms 0.0 (1,0), 0.5 (2,0), 1.0 (2,1) by construction.
  auto tensor = diagonal_tensor(3, 2, 4);
  // partial coherence of a unit-diagonal slice keeps off-diagonals (negated)
  set_pair(tensor.slices[0], 2, 0, Complex(0.3, 0));
  set_pair(tensor.slices[1], 2, 0, Complex(0.4, 0));
  set_pair(tensor.slices[0], 2, 1, Complex(0.6, 0));
  set_pair(tensor.slices[1], 2, 1, Complex(0.8, 0));
  const auto result = extract_kpcg(tensor, make_partition({0}, 2), 0.05);
  REQUIRE(result.graph.layers[0].size() == 2);
  CHECK(result.graph.layers[0][0].i == 2);
  CHECK(result.graph.layers[0][0].j == 0);
  CHECK(result.graph.layers[0][0].weight == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(result.graph.layers[0][1].i == 2);
  CHECK(result.graph.layers[0][1].j == 1);
  CHECK(result.graph.layers[0][1].weight == doctest::Approx(1.0));
}

TEST_CASE("extract_kpcg: scale invariance and threshold monotonicity") {
  Rng rng(31);
  InverseCsdTensor tensor;
  tensor.t = 10;
  for (int k = 0; k < 6; ++k)
    tensor.slices.push_back(oracles::random_hermitian_pd(rng, 4, 1.0));
  const auto partition = make_partition({0, 3}, 6);

  const auto base = extract_kpcg(tensor, partition, 0.1);
  InverseCsdTensor scaled = tensor;
  for (auto& s : scaled.slices) s *= 7.5;
  const auto rescaled = extract_kpcg(scaled, partition, 0.1);
  REQUIRE(base.graph.layers.size() == rescaled.graph.layers.size());
  for (std::size_t m = 0; m < base.graph.layers.size(); ++m) {
    REQUIRE(base.graph.layers[m].size() == rescaled.graph.layers[m].size());
    for (std::size_t e = 0; e < base.graph.layers[m].size(); ++e) {
      CHECK(base.graph.layers[m][e].i == rescaled.graph.layers[m][e].i);
      CHECK(base.graph.layers[m][e].j == rescaled.graph.layers[m][e].j);
    }
  }

  for (const auto mode : {Normalization::PerBlock, Normalization::Global}) {
    const auto loose = extract_kpcg(tensor, partition, 0.05, mode);
    const auto tight = extract_kpcg(tensor, partition, 0.6, mode);
    for (std::size_t m = 0; m < loose.graph.layers.size(); ++m)
      for (const auto& e : tight.graph.layers[m])
        CHECK(loose.graph.has_edge(static_cast<Eigen::Index>(m), e.i, e.j));
  }
}

TEST_CASE("extract_kpcg: weights exceed the threshold, no self loops, i > j") {
  Rng rng(32);
  InverseCsdTensor tensor;
  tensor.t = 10;
  for (int k = 0; k < 6; ++k)
    tensor.slices.push_back(oracles::random_hermitian_pd(rng, 5, 1.0));
  const auto result = extract_kpcg(tensor, make_partition({0, 2, 4}, 6), 0.3);
  for (const auto& layer : result.graph.layers)
    for (const auto& e : layer) {
      CHECK(e.i > e.j);
      CHECK(e.weight > 0.3);
    }
}

TEST_CASE("extract_kpcg rejects bad thresholds") {
  const auto tensor = diagonal_tensor(3, 4, 8);
  const auto partition = make_partition({0}, 4);
  CHECK_THROWS_AS((void)extract_kpcg(tensor, partition, 1.0), ValidationError);
  CHECK_THROWS_AS((void)extract_kpcg(tensor, partition, -0.1), ValidationError);
}

TEST_CASE("shd: identical, frozen cardinalities, single-layer edits") {
  const auto g = graph_with(4, {{{1, 0}, {2, 1}}, {{3, 0}}});
  CHECK(shd(g, g) == 0);

  // empty estimate vs the cardinality list {0,5,7,7,7,6,4,2} sums to 38
  Kpcg empty;
  empty.n = 8;
  empty.layers.assign(8, {});
  Kpcg truth;
  truth.n = 8;
  const int cards[8] = {0, 5, 7, 7, 7, 6, 4, 2};
  for (int m = 0; m < 8; ++m) {
    std::vector<Kpcg::Edge> edges;
    int count = 0;
    for (Eigen::Index j = 0; j < 8 && count < cards[m]; ++j)
      for (Eigen::Index i = j + 1; i < 8 && count < cards[m]; ++i) {
        edges.push_back({i, j, 1.0});
        ++count;
      }
    truth.layers.push_back(std::move(edges));
  }
  CHECK(shd(empty, truth) == 38);

  const auto a = graph_with(4, {{{1, 0}, {2, 0}}});
  const auto b = graph_with(4, {{{1, 0}, {3, 2}}});
  CHECK(shd(a, b) == 2);  // one extra, one missing

  CHECK_THROWS_AS((void)shd(a, graph_with(5, {{}})), ValidationError);
  CHECK_THROWS_AS((void)shd(a, graph_with(4, {{}, {}})), ValidationError);
}

TEST_CASE("shd is a metric on layered edge sets") {
  Rng rng(33);
  auto random_graph = [&]() {
    Kpcg g;
    g.n = 5;
    g.layers.resize(3);
    for (auto& layer : g.layers)
      for (Eigen::Index j = 0; j < 5; ++j)
        for (Eigen::Index i = j + 1; i < 5; ++i)
          if (rng.next_double() < 0.4) layer.push_back({i, j, 1.0});
    return g;
  };
  for (int trial = 0; trial < 25; ++trial) {
    const auto a = random_graph();
    const auto b = random_graph();
    const auto c = random_graph();
    CHECK(shd(a, b) == shd(b, a));
    CHECK(shd(a, c) <= shd(a, b) + shd(b, c));
    CHECK(shd(a, a) == 0);
  }
}
