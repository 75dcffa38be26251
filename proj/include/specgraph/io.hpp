#pragma once

#include <string>

#include "specgraph/graph.hpp"
#include "specgraph/ia.hpp"
#include "specgraph/synth.hpp"
#include "specgraph/types.hpp"

namespace specgraph::io {

/// Panel CSV: one series per row, comma-separated decimals, optional header.
TimeSeriesPanel read_panel_csv(const std::string& path, bool header);
void write_panel_csv(const std::string& path, const TimeSeriesPanel& panel, bool header);

enum class TensorFormat { Json, Binary };

/// CSDT-JSON: {"n","t","m","slices"} with slices[k][i][j] = [re, im],
/// row-major within each slice.
/// Binary: 16-byte magic "SPECGRAPHTENSOR1", three little-endian u64 (N,T,M),
/// then M*N*N little-endian f64 (re,im) pairs, slice-major row-major.
void write_tensor(const std::string& path, const CsdTensor& tensor, TensorFormat format);
CsdTensor read_tensor(const std::string& path);  // detects format from content

inline void write_tensor(const std::string& path, const InverseCsdTensor& tensor,
                         TensorFormat format) {
  write_tensor(path, CsdTensor{tensor.t, tensor.slices}, format);
}
inline InverseCsdTensor read_inverse_tensor(const std::string& path) {
  CsdTensor t = read_tensor(path);
  return InverseCsdTensor{t.t, std::move(t.slices), 0.0, false};
}

/// KPCG JSON: {"n","k","layers"} with layers[m] = [[i, j, weight], ...],
/// 1-based node indices, i > j.
void write_kpcg(const std::string& path, const Kpcg& graph);
Kpcg read_kpcg(const std::string& path);

/// One "layer_<m>.csv" per layer (header i,j,weight; 1-based indices).
void write_kpcg_edge_csvs(const std::string& directory, const Kpcg& graph);

/// Structure JSON: {"n","bands":[{"start_k","end_k","edges":[{"from","to",
/// "coef","lag"}]}]} with 0-based node indices.
BandStructure read_structure(const std::string& path);
void write_structure(const std::string& path, const BandStructure& structure);

void write_residual_trace_csv(const std::string& path, const std::vector<ResidualReport>& trace,
                              const IaConfig& cfg);

/// FNV-1a of a file's bytes, hex-encoded; used in generation manifests.
std::string file_hash(const std::string& path);

std::string format_double(double v);

}  // namespace specgraph::io
