#include "specgraph/io.hpp"

#include <array>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace specgraph::io {

namespace {
using nlohmann::json;

constexpr char kMagic[17] = "SPECGRAPHTENSOR1";  // 16 bytes on the wire

std::ifstream open_in(const std::string& path, std::ios::openmode mode = std::ios::in) {
  std::ifstream in(path, mode);
  require(in.good(), "cannot open " + path);
  return in;
}

std::ofstream open_out(const std::string& path, std::ios::openmode mode = std::ios::out) {
  std::ofstream out(path, mode);
  require(out.good(), "cannot write " + path);
  return out;
}

void put_u64(std::ostream& out, std::uint64_t v) {
  std::array<unsigned char, 8> bytes;
  for (int i = 0; i < 8; ++i) bytes[static_cast<std::size_t>(i)] = (v >> (8 * i)) & 0xff;
  out.write(reinterpret_cast<const char*>(bytes.data()), 8);
}

std::uint64_t get_u64(std::istream& in) {
  std::array<unsigned char, 8> bytes;
  in.read(reinterpret_cast<char*>(bytes.data()), 8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(bytes[static_cast<std::size_t>(i)]) << (8 * i);
  return v;
}

void put_f64(std::ostream& out, double v) {
  static_assert(sizeof(double) == 8);
  std::uint64_t bits;
  std::memcpy(&bits, &v, 8);
  put_u64(out, bits);
}

double get_f64(std::istream& in) {
  const std::uint64_t bits = get_u64(in);
  double v;
  std::memcpy(&v, &bits, 8);
  return v;
}

json tensor_to_json(const CsdTensor& tensor) {
  json slices = json::array();
  for (const auto& slice : tensor.slices) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < slice.rows(); ++i) {
      json row = json::array();
      for (Eigen::Index j = 0; j < slice.cols(); ++j)
        row.push_back({slice(i, j).real(), slice(i, j).imag()});
      rows.push_back(std::move(row));
    }
    slices.push_back(std::move(rows));
  }
  return json{{"n", tensor.n()}, {"t", tensor.t}, {"m", tensor.m()}, {"slices", std::move(slices)}};
}

CsdTensor tensor_from_json(const json& j) {
  require(j.contains("n") && j.contains("t") && j.contains("m") && j.contains("slices"),
          "tensor JSON must carry n, t, m, slices");
  CsdTensor tensor;
  tensor.t = j.at("t").get<Eigen::Index>();
  const auto n = j.at("n").get<Eigen::Index>();
  const auto m = j.at("m").get<Eigen::Index>();
  const auto& slices = j.at("slices");
  require(static_cast<Eigen::Index>(slices.size()) == m, "tensor JSON slice count mismatch");
  for (const auto& rows : slices) {
    require(static_cast<Eigen::Index>(rows.size()) == n, "tensor JSON row count mismatch");
    MatrixXcd slice(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto& row = rows.at(static_cast<std::size_t>(i));
      require(static_cast<Eigen::Index>(row.size()) == n, "tensor JSON column count mismatch");
      for (Eigen::Index jj = 0; jj < n; ++jj) {
        const auto& pair = row.at(static_cast<std::size_t>(jj));
        require(pair.size() == 2, "tensor JSON entries must be [re, im]");
        slice(i, jj) = Complex(pair.at(0).get<double>(), pair.at(1).get<double>());
      }
    }
    tensor.slices.push_back(std::move(slice));
  }
  return tensor;
}
}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

TimeSeriesPanel read_panel_csv(const std::string& path, bool header) {
  auto in = open_in(path);
  std::vector<std::vector<double>> rows;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (first && header) {
      first = false;
      continue;
    }
    first = false;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw ValidationError("bad number '" + cell + "' in " + path);
      }
    }
    if (!rows.empty())
      require(row.size() == rows.front().size(), "ragged rows in " + path);
    rows.push_back(std::move(row));
  }
  require(!rows.empty(), "no data rows in " + path);
  TimeSeriesPanel panel;
  panel.data.resize(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      panel.data(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  return panel;
}

void write_panel_csv(const std::string& path, const TimeSeriesPanel& panel, bool header) {
  auto out = open_out(path);
  if (header) {
    for (Eigen::Index t = 0; t < panel.t(); ++t) out << (t ? "," : "") << "t" << t;
    out << "\n";
  }
  for (Eigen::Index i = 0; i < panel.n(); ++i) {
    for (Eigen::Index t = 0; t < panel.t(); ++t)
      out << (t ? "," : "") << format_double(panel.data(i, t));
    out << "\n";
  }
}

void write_tensor(const std::string& path, const CsdTensor& tensor, TensorFormat format) {
  if (format == TensorFormat::Json) {
    auto out = open_out(path);
    out << tensor_to_json(tensor).dump(1) << "\n";
    return;
  }
  auto out = open_out(path, std::ios::binary);
  out.write(kMagic, 16);
  put_u64(out, static_cast<std::uint64_t>(tensor.n()));
  put_u64(out, static_cast<std::uint64_t>(tensor.t));
  put_u64(out, static_cast<std::uint64_t>(tensor.m()));
  for (const auto& slice : tensor.slices)
    for (Eigen::Index i = 0; i < slice.rows(); ++i)
      for (Eigen::Index j = 0; j < slice.cols(); ++j) {
        put_f64(out, slice(i, j).real());
        put_f64(out, slice(i, j).imag());
      }
}

CsdTensor read_tensor(const std::string& path) {
  auto in = open_in(path, std::ios::in | std::ios::binary);
  char head[16] = {};
  in.read(head, 16);
  if (in.gcount() == 16 && std::memcmp(head, kMagic, 16) == 0) {
    const auto n = static_cast<Eigen::Index>(get_u64(in));
    const auto t = static_cast<Eigen::Index>(get_u64(in));
    const auto m = static_cast<Eigen::Index>(get_u64(in));
    require(n > 0 && m > 0 && t >= 0, "corrupt tensor header in " + path);
    CsdTensor tensor;
    tensor.t = t;
    tensor.slices.assign(static_cast<std::size_t>(m), MatrixXcd(n, n));
    for (auto& slice : tensor.slices)
      for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
          const double re = get_f64(in);
          const double im = get_f64(in);
          slice(i, j) = Complex(re, im);
        }
    require(in.good(), "truncated tensor file " + path);
    return tensor;
  }
  in.clear();
  in.seekg(0);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ValidationError("cannot parse tensor file " + path + ": " + e.what());
  }
  return tensor_from_json(j);
}

void write_kpcg(const std::string& path, const Kpcg& graph) {
  json layers = json::array();
  for (const auto& layer : graph.layers) {
    json edges = json::array();
    for (const auto& e : layer) edges.push_back({e.i + 1, e.j + 1, e.weight});
    layers.push_back(std::move(edges));
  }
  auto out = open_out(path);
  out << json{{"n", graph.n}, {"k", graph.k()}, {"layers", std::move(layers)}}.dump(1) << "\n";
}

Kpcg read_kpcg(const std::string& path) {
  auto in = open_in(path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ValidationError("cannot parse graph file " + path + ": " + e.what());
  }
  require(j.contains("n") && j.contains("k") && j.contains("layers"),
          "graph JSON must carry n, k, layers");
  Kpcg graph;
  graph.n = j.at("n").get<Eigen::Index>();
  const auto& layers = j.at("layers");
  require(static_cast<Eigen::Index>(layers.size()) == j.at("k").get<Eigen::Index>(),
          "graph JSON layer count mismatch");
  for (const auto& layer : layers) {
    std::vector<Kpcg::Edge> edges;
    for (const auto& e : layer) {
      require(e.size() == 3, "graph edges must be [i, j, weight]");
      const auto i = e.at(0).get<Eigen::Index>() - 1;
      const auto jj = e.at(1).get<Eigen::Index>() - 1;
      require(i >= 0 && i < graph.n && jj >= 0 && jj < graph.n && i != jj,
              "graph edge endpoints out of range");
      edges.push_back({std::max(i, jj), std::min(i, jj), e.at(2).get<double>()});
    }
    graph.layers.push_back(std::move(edges));
  }
  return graph;
}

void write_kpcg_edge_csvs(const std::string& directory, const Kpcg& graph) {
  std::filesystem::create_directories(directory);
  for (std::size_t m = 0; m < graph.layers.size(); ++m) {
    auto out = open_out(directory + "/layer_" + std::to_string(m + 1) + ".csv");
    out << "i,j,weight\n";
    for (const auto& e : graph.layers[m])
      out << e.i + 1 << "," << e.j + 1 << "," << format_double(e.weight) << "\n";
  }
}

BandStructure read_structure(const std::string& path) {
  auto in = open_in(path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ValidationError("cannot parse structure file " + path + ": " + e.what());
  }
  require(j.contains("n") && j.contains("bands"), "structure JSON must carry n and bands");
  BandStructure s;
  s.n = j.at("n").get<Eigen::Index>();
  for (const auto& band : j.at("bands")) {
    require(band.contains("start_k") && band.contains("end_k") && band.contains("edges"),
            "band must carry start_k, end_k, edges");
    BandStructure::Band b;
    b.start_k = band.at("start_k").get<Eigen::Index>();
    b.end_k = band.at("end_k").get<Eigen::Index>();
    for (const auto& e : band.at("edges"))
      b.edges.push_back({e.at("from").get<Eigen::Index>(), e.at("to").get<Eigen::Index>(),
                         e.at("coef").get<double>(), e.at("lag").get<Eigen::Index>()});
    s.bands.push_back(std::move(b));
  }
  return s;
}

void write_structure(const std::string& path, const BandStructure& structure) {
  json bands = json::array();
  for (const auto& band : structure.bands) {
    json edges = json::array();
    for (const auto& e : band.edges)
      edges.push_back({{"from", e.from}, {"to", e.to}, {"coef", e.coef}, {"lag", e.lag}});
    bands.push_back({{"start_k", band.start_k}, {"end_k", band.end_k}, {"edges", std::move(edges)}});
  }
  auto out = open_out(path);
  out << json{{"n", structure.n}, {"bands", std::move(bands)}}.dump(1) << "\n";
}

void write_residual_trace_csv(const std::string& path, const std::vector<ResidualReport>& trace,
                              const IaConfig& cfg) {
  auto out = open_out(path);
  out << "t,xi,pi1,pi2,p3,pi4,pi5,pi6,d1,d2,converged\n";
  double xi = 1.0;  // the stepsize in effect during sweep t (xi^{t-1}, xi^0 = 1)
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const auto& r = trace[i];
    out << i + 1 << "," << format_double(xi) << "," << format_double(r.pi1) << ","
        << format_double(r.pi2) << "," << format_double(r.p3) << "," << format_double(r.pi4)
        << "," << format_double(r.pi5) << "," << format_double(r.pi6) << ","
        << format_double(r.d1) << "," << format_double(r.d2) << "," << (r.converged ? 1 : 0)
        << "\n";
    xi = ia_stepsize(static_cast<long>(i + 1), xi, cfg);
  }
}

std::string file_hash(const std::string& path) {
  auto in = open_in(path, std::ios::in | std::ios::binary);
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  char c;
  while (in.get(c)) {
    hash ^= static_cast<unsigned char>(c);
    hash *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

}  // namespace specgraph::io
