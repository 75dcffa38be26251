#include "specgraph/synth.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "specgraph/rng.hpp"

namespace specgraph {

namespace {
constexpr double kPi = 3.14159265358979323846;

// Kahn topological sort over the union of band edges; empty result on cycle.
std::vector<Eigen::Index> topo_order(const BandStructure& s) {
  const auto n = static_cast<std::size_t>(s.n);
  std::vector<std::vector<Eigen::Index>> children(n);
  std::vector<int> indeg(n, 0);
  for (const auto& band : s.bands)
    for (const auto& e : band.edges) {
      children[static_cast<std::size_t>(e.from)].push_back(e.to);
      ++indeg[static_cast<std::size_t>(e.to)];
    }
  std::vector<Eigen::Index> order;
  std::vector<Eigen::Index> ready;
  for (std::size_t i = 0; i < n; ++i)
    if (indeg[i] == 0) ready.push_back(static_cast<Eigen::Index>(i));
  while (!ready.empty()) {
    std::sort(ready.begin(), ready.end());
    const Eigen::Index v = ready.front();
    ready.erase(ready.begin());
    order.push_back(v);
    for (const Eigen::Index c : children[static_cast<std::size_t>(v)])
      if (--indeg[static_cast<std::size_t>(c)] == 0) ready.push_back(c);
  }
  return order.size() == n ? order : std::vector<Eigen::Index>{};
}

bool band_is_acyclic(const BandStructure::Band& band, Eigen::Index n) {
  BandStructure one;
  one.n = n;
  one.bands.push_back(band);
  return !topo_order(one).empty();
}

double sinc(double x) { return x == 0.0 ? 1.0 : std::sin(kPi * x) / (kPi * x); }
}  // namespace

void validate_structure(const BandStructure& structure, Eigen::Index t) {
  require(structure.n >= 2, "structure needs at least 2 nodes");
  const Eigen::Index m = slice_count_for(t);
  for (const auto& band : structure.bands) {
    require(band.start_k >= 0 && band.start_k < band.end_k && band.end_k <= m,
            "band range must satisfy 0 <= start_k < end_k <= floor(T/2)+1");
    for (const auto& e : band.edges) {
      require(e.from >= 0 && e.from < structure.n && e.to >= 0 && e.to < structure.n,
              "edge endpoint out of range");
      require(e.from != e.to, "self-loops are not allowed");
      require(std::isfinite(e.coef), "edge coefficient must be finite");
      require(e.lag >= 0, "edge lag must be nonnegative");
    }
    require(band_is_acyclic(band, structure.n), "band edge list contains a cycle");
  }
  // The finite-depth DAG cascade has a nilpotent coupling operator, so the
  // process is stable for any finite coefficients; generation additionally
  // needs the union of bands to be a DAG.
  require(!topo_order(structure).empty(), "union of band edge lists contains a cycle");
}

VectorXd bandpass_taps(Eigen::Index start_k, Eigen::Index end_k, Eigen::Index t) {
  const double lo = static_cast<double>(start_k) / static_cast<double>(t);
  const double hi = std::min(0.5, static_cast<double>(end_k) / static_cast<double>(t));
  require(hi > lo, "empty band");

  // Hamming-windowed sinc: transition ~ 3.3/L of normalized frequency. Keep
  // it within 10% of the band width and inset the cutoffs so the stopband
  // edges land on the band boundaries.
  const double width = hi - lo;
  auto order = static_cast<Eigen::Index>(std::ceil(3.3 / (0.1 * width)));
  order = std::max<Eigen::Index>(order, 128);
  if (order % 2 != 0) ++order;
  const double transition = 3.3 / static_cast<double>(order);
  const double cut_lo = lo + 0.5 * transition;
  const double cut_hi = hi - 0.5 * transition;

  const Eigen::Index half = order / 2;
  VectorXd taps(order + 1);
  for (Eigen::Index i = 0; i <= order; ++i) {
    const double x = static_cast<double>(i - half);
    const double ideal = 2.0 * cut_hi * sinc(2.0 * cut_hi * x) - 2.0 * cut_lo * sinc(2.0 * cut_lo * x);
    const double window =
        0.54 - 0.46 * std::cos(2.0 * kPi * static_cast<double>(i) / static_cast<double>(order));
    taps[i] = ideal * window;
  }
  return taps;
}

TimeSeriesPanel generate(const BandStructure& structure, Eigen::Index t, std::uint64_t seed) {
  require(t >= 8, "generation needs T >= 8");
  validate_structure(structure, t);
  const Eigen::Index n = structure.n;

  std::vector<VectorXd> taps;
  Eigen::Index reach = 0;  // filter half-length plus lag, worst case
  for (const auto& band : structure.bands) {
    taps.push_back(bandpass_taps(band.start_k, band.end_k, t));
    Eigen::Index lag = 0;
    for (const auto& e : band.edges) lag = std::max(lag, e.lag);
    reach = std::max(reach, (taps.back().size() - 1) / 2 + lag);
  }
  const Eigen::Index margin = reach * n;  // enough context for the deepest cascade
  const Eigen::Index ext = t + 2 * margin;

  // Innovation streams are derived per node so the panel is independent of
  // the processing order.
  std::vector<VectorXd> signal(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
    VectorXd e(ext);
    for (Eigen::Index s = 0; s < ext; ++s) e[s] = rng.next_gaussian();
    signal[static_cast<std::size_t>(i)] = std::move(e);
  }

  const auto order = topo_order(structure);
  for (const Eigen::Index node : order) {
    for (std::size_t b = 0; b < structure.bands.size(); ++b) {
      const auto& band = structure.bands[b];
      const auto& h = taps[b];
      const Eigen::Index half = (h.size() - 1) / 2;
      for (const auto& e : band.edges) {
        if (e.to != node) continue;
        const VectorXd& parent = signal[static_cast<std::size_t>(e.from)];
        VectorXd& child = signal[static_cast<std::size_t>(node)];
        for (Eigen::Index s = 0; s < ext; ++s) {
          double acc = 0.0;
          const Eigen::Index base = s - e.lag;
          for (Eigen::Index j = -half; j <= half; ++j) {
            const Eigen::Index idx = base - j;
            if (idx >= 0 && idx < ext) acc += h[j + half] * parent[idx];
          }
          child[s] += e.coef * acc;
        }
      }
    }
  }

  TimeSeriesPanel panel;
  panel.data.resize(n, t);
  for (Eigen::Index i = 0; i < n; ++i)
    panel.data.row(i) = signal[static_cast<std::size_t>(i)].segment(margin, t).transpose();
  return panel;
}

Kpcg ground_truth_kpcg(const BandStructure& structure, const FrequencyPartition& partition) {
  Kpcg truth;
  truth.n = structure.n;
  truth.layers.assign(static_cast<std::size_t>(partition.blocks()), {});
  for (Eigen::Index m = 0; m < partition.blocks(); ++m) {
    std::set<std::pair<Eigen::Index, Eigen::Index>> edges;
    for (const auto& band : structure.bands) {
      const bool overlaps =
          band.start_k < partition.block_end(m) && band.end_k > partition.block_begin(m);
      if (!overlaps) continue;
      for (const auto& e : band.edges)
        edges.emplace(std::max(e.from, e.to), std::min(e.from, e.to));
      // co-parents: every pair of nodes sharing a child within this band
      for (const auto& a : band.edges)
        for (const auto& b : band.edges)
          if (a.to == b.to && a.from != b.from)
            edges.emplace(std::max(a.from, b.from), std::min(a.from, b.from));
    }
    for (const auto& [i, j] : edges)
      truth.layers[static_cast<std::size_t>(m)].push_back({i, j, 1.0});
  }
  return truth;
}

BandStructure reference_structure() {
  BandStructure s;
  s.n = 6;
  BandStructure::Band slow;
  slow.start_k = 128;
  slow.end_k = 256;
  slow.edges = {{0, 1, 0.9, 1}, {4, 1, 0.8, 2}, {2, 3, 0.9, 1}, {3, 5, 0.7, 2}};
  BandStructure::Band fast;
  fast.start_k = 256;
  fast.end_k = 513;
  fast.edges = {{0, 2, 0.9, 0}, {4, 2, 0.8, 1}, {1, 3, 0.8, 1}};
  s.bands = {slow, fast};
  return s;
}

}  // namespace specgraph
