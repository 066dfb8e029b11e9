#pragma once

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pullsched/types.hpp"

namespace pullsched {

// Shortest round-trip decimal form, used everywhere a double reaches a file
// so reports are byte-deterministic.
inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

// Everything the delivery-ratio definitions need, decoupled from the engine:
// chunk seqs of one emission tick occupy offsets [0, chunks_per_tick) with
// layer_of_offset giving each offset's layer; measured emission ticks span
// [measure_start, measure_end); on_time[node][(tick - measure_start) *
// chunks_per_tick + offset] says whether that chunk arrived by its deadline.
struct MetricsInput {
  int layers = 1;
  int chunks_per_tick = 1;
  std::vector<int> layer_of_offset;
  Tick measure_start = 0;
  Tick measure_end = 0;
  std::vector<int> playable_layers;       // per node
  std::vector<std::vector<char>> on_time; // per node, per measured chunk
};

namespace detail {

inline std::size_t measured_ticks(const MetricsInput& in) {
  return in.measure_end > in.measure_start
             ? static_cast<std::size_t>(in.measure_end - in.measure_start)
             : 0;
}

// Chunk at `offset` of one tick is well received iff it and every lower-layer
// chunk emitted the same tick arrived on time.
inline bool well_received(const MetricsInput& in, const std::vector<char>& node,
                          std::size_t tick_index, int offset) {
  const std::size_t base = tick_index * static_cast<std::size_t>(in.chunks_per_tick);
  if (!node[base + static_cast<std::size_t>(offset)]) return false;
  const int layer = in.layer_of_offset[static_cast<std::size_t>(offset)];
  for (int o = 0; o < in.chunks_per_tick; ++o)
    if (in.layer_of_offset[static_cast<std::size_t>(o)] < layer && !node[base + static_cast<std::size_t>(o)])
      return false;
  return true;
}

}  // namespace detail

// Mean over all nodes of on-time received / emitted. Single-layer metric; no
// layer-dependency rule and no can-play filter.
inline double single_layer_delivery_ratio(const MetricsInput& in) {
  const std::size_t ticks = detail::measured_ticks(in);
  const std::size_t total = ticks * static_cast<std::size_t>(in.chunks_per_tick);
  if (total == 0 || in.on_time.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& node : in.on_time) {
    std::size_t got = 0;
    for (std::size_t i = 0; i < total; ++i) got += node[i] ? 1u : 0u;
    sum += static_cast<double>(got) / static_cast<double>(total);
  }
  return sum / static_cast<double>(in.on_time.size());
}

// Fraction of layer-l chunks well received (lower layers of the same tick on
// time too), averaged over the nodes that can play layer l.
inline double layered_delivery_ratio(const MetricsInput& in, int layer) {
  if (layer < 1 || layer > in.layers)
    throw std::invalid_argument("layered_delivery_ratio: layer out of range");
  const std::size_t ticks = detail::measured_ticks(in);
  std::size_t per_tick = 0;
  for (int o = 0; o < in.chunks_per_tick; ++o)
    if (in.layer_of_offset[static_cast<std::size_t>(o)] == layer) ++per_tick;
  const std::size_t total = ticks * per_tick;
  double sum = 0.0;
  std::size_t nodes = 0;
  for (std::size_t v = 0; v < in.on_time.size(); ++v) {
    if (in.playable_layers[v] < layer) continue;
    ++nodes;
    if (total == 0) continue;
    std::size_t well = 0;
    for (std::size_t t = 0; t < ticks; ++t)
      for (int o = 0; o < in.chunks_per_tick; ++o)
        if (in.layer_of_offset[static_cast<std::size_t>(o)] == layer &&
            detail::well_received(in, in.on_time[v], t, o))
          ++well;
    sum += static_cast<double>(well) / static_cast<double>(total);
  }
  if (nodes == 0 || total == 0) return 0.0;
  return sum / static_cast<double>(nodes);
}

// Mean over nodes of (well-received over the node's playable layers) /
// (emitted over those layers). Nodes that cannot play any layer score 0.
inline double aggregate_delivery(const MetricsInput& in) {
  const std::size_t ticks = detail::measured_ticks(in);
  if (in.on_time.empty()) return 0.0;
  double sum = 0.0;
  for (std::size_t v = 0; v < in.on_time.size(); ++v) {
    const int playable = in.playable_layers[v];
    std::size_t total = 0;
    std::size_t well = 0;
    for (std::size_t t = 0; t < ticks; ++t)
      for (int o = 0; o < in.chunks_per_tick; ++o) {
        if (in.layer_of_offset[static_cast<std::size_t>(o)] > playable) continue;
        ++total;
        if (detail::well_received(in, in.on_time[v], t, o)) ++well;
      }
    sum += total == 0 ? 0.0
                      : static_cast<double>(well) / static_cast<double>(total);
  }
  return sum / static_cast<double>(in.on_time.size());
}

struct MetricsReport {
  std::string strategy;
  std::uint64_t seed = 0;
  int layers = 1;
  int stream_rate_kbps = 0;
  int window_s = 0;
  std::vector<double> per_layer;  // empty for a zero-duration run
  double aggregate = 0.0;
  std::uint64_t expired_count = 0;
  std::uint64_t requested_count = 0;
  std::uint64_t duplicate_request_count = 0;
  std::uint64_t chunks_emitted_measured = 0;
  std::uint64_t config_hash = 0;
  Tick ticks_simulated = 0;
  std::size_t node_count = 0;
  bool overlay_regular = true;
};

inline constexpr const char* kCsvHeader =
    "strategy,seed,layers,layer,delivery_ratio,stream_rate_kbps,window_s";

struct CsvRow {
  std::string strategy;
  std::uint64_t seed = 0;
  int layers = 1;
  int layer = 0;  // 0 = aggregate row
  double delivery_ratio = 0.0;
  int stream_rate_kbps = 0;
  int window_s = 0;
};

// One row per layer in layer order, then the layer=0 aggregate row. A report
// with no measured chunks yields no rows.
inline std::vector<CsvRow> report_rows(const MetricsReport& r) {
  std::vector<CsvRow> rows;
  if (r.per_layer.empty()) return rows;
  CsvRow base{r.strategy, r.seed, r.layers, 0, 0.0, r.stream_rate_kbps, r.window_s};
  for (std::size_t l = 0; l < r.per_layer.size(); ++l) {
    CsvRow row = base;
    row.layer = static_cast<int>(l + 1);
    row.delivery_ratio = r.per_layer[l];
    rows.push_back(row);
  }
  CsvRow agg = base;
  agg.delivery_ratio = r.aggregate;
  rows.push_back(agg);
  return rows;
}

inline std::string rows_to_csv(const std::vector<CsvRow>& rows) {
  std::string out = kCsvHeader;
  out += '\n';
  for (const CsvRow& r : rows) {
    out += r.strategy;
    out += ',';
    out += std::to_string(r.seed);
    out += ',';
    out += std::to_string(r.layers);
    out += ',';
    out += std::to_string(r.layer);
    out += ',';
    out += format_double(r.delivery_ratio);
    out += ',';
    out += std::to_string(r.stream_rate_kbps);
    out += ',';
    out += std::to_string(r.window_s);
    out += '\n';
  }
  return out;
}

inline std::string to_csv(const MetricsReport& r) { return rows_to_csv(report_rows(r)); }

inline std::vector<CsvRow> parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader)
    throw std::invalid_argument("csv: bad or missing header");
  std::vector<CsvRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ls(line);
    while (std::getline(ls, field, ',')) fields.push_back(field);
    if (fields.size() != 7)
      throw std::invalid_argument("csv: expected 7 fields, got line \"" + line + "\"");
    CsvRow r;
    r.strategy = fields[0];
    r.seed = std::stoull(fields[1]);
    r.layers = std::stoi(fields[2]);
    r.layer = std::stoi(fields[3]);
    r.delivery_ratio = std::stod(fields[4]);
    r.stream_rate_kbps = std::stoi(fields[5]);
    r.window_s = std::stoi(fields[6]);
    rows.push_back(r);
  }
  return rows;
}

inline nlohmann::ordered_json report_to_json(const MetricsReport& r) {
  nlohmann::ordered_json j;
  j["strategy"] = r.strategy;
  j["seed"] = r.seed;
  j["layers"] = r.layers;
  j["stream_rate_kbps"] = r.stream_rate_kbps;
  j["window_s"] = r.window_s;
  j["per_layer_delivery"] = nlohmann::ordered_json::array();
  for (std::size_t l = 0; l < r.per_layer.size(); ++l)
    j["per_layer_delivery"].push_back(
        {{"layer", l + 1}, {"ratio", r.per_layer[l]}});
  j["aggregate_delivery"] = r.aggregate;
  j["expired_count"] = r.expired_count;
  j["requested_count"] = r.requested_count;
  j["duplicate_request_count"] = r.duplicate_request_count;
  j["chunks_emitted_measured"] = r.chunks_emitted_measured;
  j["config_hash"] = r.config_hash;
  j["ticks_simulated"] = r.ticks_simulated;
  j["node_count"] = r.node_count;
  j["overlay_regular"] = r.overlay_regular;
  return j;
}

enum class ReportFormat { kCsv, kJson };

// Writes <strategy>-seed<seed>.<ext> under out_dir and returns the path.
inline std::filesystem::path emit_report(const MetricsReport& r, ReportFormat format,
                                         const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  const std::string stem = r.strategy + "-seed" + std::to_string(r.seed);
  const std::filesystem::path path =
      out_dir / (stem + (format == ReportFormat::kCsv ? ".csv" : ".json"));
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  if (format == ReportFormat::kCsv)
    out << to_csv(r);
  else
    out << report_to_json(r).dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path.string());
  return path;
}

}  // namespace pullsched
