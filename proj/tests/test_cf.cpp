#include <doctest.h>

#include <algorithm>
#include <vector>

#include "oracles.hpp"
#include "specgraph/cf.hpp"

using namespace specgraph;

namespace {
InverseCsdTensor random_hermitian_tensor(Rng& rng, Eigen::Index n, Eigen::Index m,
                                         Eigen::Index t) {
  InverseCsdTensor tensor;
  tensor.t = t;
  for (Eigen::Index k = 0; k < m; ++k)
    tensor.slices.push_back(oracles::random_hermitian(rng, n));
  return tensor;
}

// Exhaustive search over all size-s strictly-lower supports of one block.
std::vector<std::pair<Eigen::Index, Eigen::Index>> best_support_bruteforce(
    const InverseCsdTensor& tensor, Eigen::Index lo, Eigen::Index hi, Eigen::Index s) {
  const Eigen::Index n = tensor.n();
  std::vector<std::pair<Eigen::Index, Eigen::Index>> pairs;
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = j + 1; i < n; ++i) pairs.emplace_back(i, j);
  std::vector<double> weight(pairs.size(), 0.0);
  for (std::size_t c = 0; c < pairs.size(); ++c)
    for (Eigen::Index k = lo; k < hi; ++k)
      weight[c] += std::norm(tensor.slices[static_cast<std::size_t>(k)](pairs[c].first,
                                                                        pairs[c].second));
  // Minimizing the residual over a fixed-size support keeps the heaviest
  // columns; enumerate every subset to avoid assuming that.
  std::vector<bool> select(pairs.size(), false);
  std::fill(select.end() - static_cast<long>(s), select.end(), true);
  double best = -1.0;
  std::vector<std::pair<Eigen::Index, Eigen::Index>> best_pairs;
  do {
    double kept = 0.0;
    std::vector<std::pair<Eigen::Index, Eigen::Index>> chosen;
    for (std::size_t c = 0; c < pairs.size(); ++c)
      if (select[c]) {
        kept += weight[c];
        chosen.push_back(pairs[c]);
      }
    if (kept > best) {
      best = kept;
      best_pairs = chosen;
    }
  } while (std::next_permutation(select.begin(), select.end()));
  return best_pairs;
}

std::vector<std::pair<Eigen::Index, Eigen::Index>> support_of(const InverseCsdTensor& tensor,
                                                              Eigen::Index lo, Eigen::Index hi) {
  std::vector<std::pair<Eigen::Index, Eigen::Index>> out;
  const Eigen::Index n = tensor.n();
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = j + 1; i < n; ++i) {
      double nsq = 0.0;
      for (Eigen::Index k = lo; k < hi; ++k)
        nsq += std::norm(tensor.slices[static_cast<std::size_t>(k)](i, j));
      if (nsq > 0.0) out.emplace_back(i, j);
    }
  return out;
}
}  // namespace

TEST_CASE("cf_learn: full budget reproduces the Hermitianized input") {
  Rng rng(21);
  const auto tensor = random_hermitian_tensor(rng, 3, 6, 10);
  const auto partition = make_partition({0, 3}, 6);
  SparsityBudget budget{{3, 3}};
  const auto out = cf_learn(tensor, partition, budget);
  for (std::size_t k = 0; k < 6; ++k)
    CHECK((out.slices[k] - hermitianize(tensor.slices[k])).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("cf_learn: zero budget keeps only the diagonal") {
  Rng rng(22);
  const auto tensor = random_hermitian_tensor(rng, 4, 5, 8);
  const auto partition = make_partition({0}, 5);
  const auto out = cf_learn(tensor, partition, SparsityBudget{{0}});
  for (std::size_t k = 0; k < 5; ++k) {
    for (Eigen::Index i = 0; i < 4; ++i) {
      CHECK(out.slices[k](i, i) == tensor.slices[k](i, i));
      for (Eigen::Index j = 0; j < 4; ++j)
        if (i != j) CHECK(out.slices[k](i, j) == Complex(0, 0));
    }
  }
}

TEST_CASE("cf_learn: selects the dominant fiber and fills the conjugate") {
  // One block of two frequencies; fiber l2 norms (2,1)->0.5, (3,1)->2.0, (3,2)->0.1.
  const Eigen::Index n = 3;
  MatrixXcd s0 = MatrixXcd::Identity(n, n), s1 = MatrixXcd::Identity(n, n);
  auto set_pair = [&](MatrixXcd& s, Eigen::Index i, Eigen::Index j, Complex v) {
    s(i, j) = v;
    s(j, i) = std::conj(v);
  };
  set_pair(s0, 1, 0, Complex(0.3, 0.4));   // |.|=0.5 at k=0 only
  set_pair(s0, 2, 0, Complex(0, 1.2));     // part of norm 2.0
  set_pair(s1, 2, 0, Complex(1.6, 0));     // sqrt(1.2^2+1.6^2) = 2.0
  set_pair(s1, 2, 1, Complex(0.1, 0));     // norm 0.1
  InverseCsdTensor tensor{4, {s0, s1}, 0.0, false};
  const auto out = cf_learn(tensor, make_partition({0}, 2), SparsityBudget{{1}});
  CHECK(out.slices[0](1, 0) == Complex(0, 0));
  CHECK(out.slices[1](2, 1) == Complex(0, 0));
  CHECK(out.slices[0](2, 0) == Complex(0, 1.2));
  CHECK(out.slices[1](2, 0) == Complex(1.6, 0));
  CHECK(out.slices[0](0, 2) == std::conj(Complex(0, 1.2)));
  CHECK(out.slices[1](0, 2) == Complex(1.6, 0));
}

TEST_CASE("cf_learn: budget/partition mismatch is rejected") {
  Rng rng(23);
  const auto tensor = random_hermitian_tensor(rng, 3, 4, 6);
  const auto partition = make_partition({0, 2}, 4);
  CHECK_THROWS_AS((void)cf_learn(tensor, partition, SparsityBudget{{1}}), ValidationError);
  CHECK_THROWS_AS((void)cf_learn(tensor, partition, SparsityBudget{{1, 5}}), ValidationError);
}

TEST_CASE("cf_objective: zero at the input, energy of pruned columns") {
  Rng rng(24);
  const auto tensor = random_hermitian_tensor(rng, 3, 4, 6);
  const auto partition = make_partition({0}, 4);
  const auto mask = make_mask(MaskKind::StrictLower, 3);
  const auto flat = flatten_block(tensor, partition, 0);
  CHECK(cf_objective(flat, flat, mask) == 0.0);

  BlockFlattening zero = flat;
  zero.values.setZero();
  double expect = 0.0;
  for (Eigen::Index c = 0; c < flat.values.cols(); ++c)
    if (mask.keep[static_cast<std::size_t>(c)]) expect += flat.values.col(c).squaredNorm();
  CHECK(cf_objective(flat, zero, mask) == doctest::Approx(expect).epsilon(1e-12));

  BlockFlattening other{4, 0, MatrixXcd::Zero(4, 16)};
  CHECK_THROWS_AS((void)cf_objective(flat, other, mask), ValidationError);
}

TEST_CASE("cf_learn achieves the exhaustive-search optimum") {
  Rng rng(25);
  int checked = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index n = 3 + static_cast<Eigen::Index>(rng.next_u64() % 2);
    const Eigen::Index block = 1 + static_cast<Eigen::Index>(rng.next_u64() % 3);
    const Eigen::Index s = 1 + static_cast<Eigen::Index>(rng.next_u64() % 2);
    // two padding frequencies after the block under test keep K < M
    const auto tensor = random_hermitian_tensor(rng, n, block + 2, 2 * block + 4);
    const auto partition = make_partition({0, block}, block + 2);
    const auto out = cf_learn(tensor, partition, SparsityBudget{{s, 0}});
    auto mine = support_of(out, 0, block);
    auto best = best_support_bruteforce(tensor, 0, block, s);
    std::sort(mine.begin(), mine.end());
    std::sort(best.begin(), best.end());
    CHECK(mine == best);
    ++checked;
  }
  CHECK(checked == 100);
}

TEST_CASE("cf_learn: exact support recovery under small perturbations") {
  Rng rng(26);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::Index n = 4;
    const Eigen::Index block = 3;
    InverseCsdTensor tensor;
    tensor.t = 8;
    for (Eigen::Index k = 0; k < block; ++k) {
      MatrixXcd s = MatrixXcd::Identity(n, n);
      // planted support (2,0), (3,1) with strong fibers; noise well below
      auto plant = [&](Eigen::Index i, Eigen::Index j) {
        const Complex v(1.0 + rng.next_double(), rng.next_gaussian() * 0.2);
        s(i, j) = v;
        s(j, i) = std::conj(v);
      };
      plant(2, 0);
      plant(3, 1);
      for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = j + 1; i < n; ++i)
          if (!((i == 2 && j == 0) || (i == 3 && j == 1))) {
            const Complex noise(0.01 * rng.next_gaussian(), 0.01 * rng.next_gaussian());
            s(i, j) += noise;
            s(j, i) += std::conj(noise);
          }
      tensor.slices.push_back(std::move(s));
    }
    const auto out = cf_learn(tensor, make_partition({0}, block), SparsityBudget{{2}});
    const auto mine = support_of(out, 0, block);
    REQUIRE(mine.size() == 2);
    CHECK(mine[0] == std::make_pair<Eigen::Index, Eigen::Index>(2, 0));
    CHECK(mine[1] == std::make_pair<Eigen::Index, Eigen::Index>(3, 1));
  }
}

TEST_CASE("cf_learn: deterministic tie-break keeps the smaller pair") {
  const Eigen::Index n = 3;
  MatrixXcd s = MatrixXcd::Identity(n, n);
  s(1, 0) = s(0, 1) = Complex(1, 0);
  s(2, 0) = s(0, 2) = Complex(1, 0);  // same fiber norm as (1,0)
  InverseCsdTensor tensor{4, {s, MatrixXcd::Identity(n, n), MatrixXcd::Identity(n, n)}, 0.0,
                          false};
  const auto out = cf_learn(tensor, make_partition({0, 1}, 3), SparsityBudget{{1, 0}});
  CHECK(out.slices[0](1, 0) == Complex(1, 0));
  CHECK(out.slices[0](2, 0) == Complex(0, 0));
}

TEST_CASE("cf_learn output is Hermitian slice-wise") {
  Rng rng(27);
  InverseCsdTensor tensor;
  tensor.t = 10;
  for (int k = 0; k < 5; ++k) tensor.slices.push_back(oracles::random_cmatrix(rng, 4));
  const auto out = cf_learn(tensor, make_partition({0, 2}, 5), SparsityBudget{{2, 3}});
  for (const auto& slice : out.slices) {
    // exact equality between (i,j) and conj (j,i) on the off-diagonal
    for (Eigen::Index j = 0; j < 4; ++j)
      for (Eigen::Index i = j + 1; i < 4; ++i)
        CHECK(slice(i, j) == std::conj(slice(j, i)));
  }
}
