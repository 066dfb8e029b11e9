#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pullsched/priority.hpp"
#include "pullsched/scheduler.hpp"
#include "pullsched/types.hpp"

namespace pullsched {

struct BandwidthClass {
  double fraction = 1.0;
  int download_kbps = 0;
};

struct StreamSpec {
  int layers = 1;
  std::vector<int> layer_rate_kbps;
  int chunk_size_kbits = 10;

  int total_rate_kbps() const {
    return std::accumulate(layer_rate_kbps.begin(), layer_rate_kbps.end(), 0);
  }
  // Chunks emitted per tick for one layer (config validation guarantees the
  // division is exact).
  int layer_chunks_per_tick(int layer) const {
    return layer_rate_kbps.at(static_cast<std::size_t>(layer - 1)) / chunk_size_kbits;
  }
  int chunks_per_tick() const { return total_rate_kbps() / chunk_size_kbits; }
};

struct SimConfig {
  std::size_t node_count = 0;
  int degree = 0;
  std::uint64_t seed = 1;
  Tick duration_ticks = 0;
  Strategy strategy = Strategy::kNassched;
  PriorityParams priority;
  StreamSpec stream;
  std::vector<BandwidthClass> bandwidth_classes;
  int window_seconds = 10;
  int request_period_seconds = 1;

  int window_ticks() const { return window_seconds / request_period_seconds; }
  int download_chunks(std::size_t cls) const {
    return std::max(1, bandwidth_classes.at(cls).download_kbps / stream.chunk_size_kbits);
  }
  int upload_chunks(std::size_t cls) const {
    return std::max(1, (bandwidth_classes.at(cls).download_kbps / 2) / stream.chunk_size_kbits);
  }
  int source_upload_chunks() const { return 4 * stream.chunks_per_tick(); }

  void validate() const {
    if (node_count < 2) throw std::invalid_argument("config: node_count must be >= 2");
    if (degree < 1 || static_cast<std::size_t>(degree) >= node_count)
      throw std::invalid_argument("config: degree must be in [1, node_count)");
    if (duration_ticks < 0) throw std::invalid_argument("config: duration_ticks must be >= 0");
    if (request_period_seconds != 1)
      throw std::invalid_argument("config: request_period_seconds must be 1");
    if (window_seconds < 1) throw std::invalid_argument("config: window_seconds must be >= 1");
    if (stream.layers < 1) throw std::invalid_argument("config: stream.layers must be >= 1");
    if (stream.chunk_size_kbits < 1)
      throw std::invalid_argument("config: stream.chunk_size_kbits must be >= 1");
    if (stream.layer_rate_kbps.size() != static_cast<std::size_t>(stream.layers))
      throw std::invalid_argument(
          "config: stream.layer_rate_kbps must list one rate per layer");
    for (int rate : stream.layer_rate_kbps) {
      if (rate < 1) throw std::invalid_argument("config: layer rates must be positive");
      if (rate % stream.chunk_size_kbits != 0)
        throw std::invalid_argument(
            "config: layer rate " + std::to_string(rate) +
            " Kbps is not a whole number of chunks per tick");
    }
    if (bandwidth_classes.empty())
      throw std::invalid_argument("config: bandwidth_classes must be non-empty");
    double sum = 0.0;
    for (const BandwidthClass& c : bandwidth_classes) {
      if (c.fraction < 0.0)
        throw std::invalid_argument("config: class fractions must be >= 0");
      if (c.download_kbps < 1)
        throw std::invalid_argument("config: class download_kbps must be positive");
      sum += c.fraction;
    }
    if (std::abs(sum - 1.0) > 1e-9)
      throw std::invalid_argument("config: class fractions must sum to 1.0");
    PriorityParams p = priority;
    p.max_layer = stream.layers;
    p.validate();
  }
};

namespace detail {

inline void reject_unknown(const nlohmann::json& obj, const std::string& path,
                           std::initializer_list<const char*> known) {
  if (!obj.is_object())
    throw std::invalid_argument("config: " + path + " must be a JSON object");
  for (const auto& item : obj.items()) {
    bool found = false;
    for (const char* k : known)
      if (item.key() == k) { found = true; break; }
    if (!found)
      throw std::invalid_argument("config: unknown key \"" + path + item.key() + "\"");
  }
}

}  // namespace detail

// Parses the run configuration. The document mirrors SimConfig; unknown keys
// anywhere are errors so that typos fail fast. `priority.theta` accepts a
// number or the strings "default" / "conservative".
inline SimConfig parse_config(const nlohmann::json& j) {
  detail::reject_unknown(j, "", {"node_count", "degree", "seed", "duration_ticks",
                                 "strategy", "window_seconds", "request_period_seconds",
                                 "priority", "stream", "bandwidth_classes"});
  SimConfig cfg;
  cfg.node_count = j.at("node_count").get<std::size_t>();
  cfg.degree = j.at("degree").get<int>();
  cfg.seed = j.value("seed", std::uint64_t{1});
  cfg.duration_ticks = j.at("duration_ticks").get<Tick>();
  cfg.strategy = parse_strategy(j.value("strategy", std::string{"nassched"}));
  cfg.window_seconds = j.at("window_seconds").get<int>();
  cfg.request_period_seconds = j.value("request_period_seconds", 1);

  const nlohmann::json& s = j.at("stream");
  detail::reject_unknown(s, "stream.", {"layers", "layer_rate_kbps", "chunk_size_kbits"});
  cfg.stream.layers = s.at("layers").get<int>();
  cfg.stream.chunk_size_kbits = s.value("chunk_size_kbits", 10);
  const nlohmann::json& rates = s.at("layer_rate_kbps");
  if (rates.is_number()) {
    cfg.stream.layer_rate_kbps.assign(
        static_cast<std::size_t>(std::max(cfg.stream.layers, 0)), rates.get<int>());
  } else {
    cfg.stream.layer_rate_kbps = rates.get<std::vector<int>>();
  }

  cfg.priority.max_layer = cfg.stream.layers;
  if (j.contains("priority")) {
    const nlohmann::json& p = j.at("priority");
    detail::reject_unknown(p, "priority.",
                           {"theta", "ep_base", "lp_base", "min_exponent"});
    cfg.priority.ep_base = p.value("ep_base", 10.0);
    cfg.priority.lp_base = p.value("lp_base", 10.0);
    cfg.priority.min_exponent = p.value("min_exponent", -30);
    if (p.contains("theta")) {
      const nlohmann::json& t = p.at("theta");
      if (t.is_string()) {
        const auto name = t.get<std::string>();
        if (name == "default") cfg.priority.theta = default_theta(cfg.priority);
        else if (name == "conservative") cfg.priority.theta = conservative_theta(cfg.priority);
        else throw std::invalid_argument("config: priority.theta string must be "
                                         "\"default\" or \"conservative\"");
      } else {
        cfg.priority.theta = t.get<double>();
      }
    } else {
      cfg.priority.theta = cfg.stream.layers > 1 ? default_theta(cfg.priority) : 0.0;
    }
  } else {
    cfg.priority.theta =
        cfg.stream.layers > 1 ? default_theta(cfg.priority) : 0.0;
  }

  for (const nlohmann::json& c : j.at("bandwidth_classes")) {
    detail::reject_unknown(c, "bandwidth_classes[].", {"fraction", "download_kbps"});
    BandwidthClass bc;
    bc.fraction = c.at("fraction").get<double>();
    bc.download_kbps = c.at("download_kbps").get<int>();
    cfg.bandwidth_classes.push_back(bc);
  }
  cfg.validate();
  return cfg;
}

// Canonical dump: fixed key order so the hash and the JSON report are stable.
inline nlohmann::ordered_json config_to_json(const SimConfig& cfg) {
  nlohmann::ordered_json j;
  j["node_count"] = cfg.node_count;
  j["degree"] = cfg.degree;
  j["seed"] = cfg.seed;
  j["duration_ticks"] = cfg.duration_ticks;
  j["strategy"] = to_string(cfg.strategy);
  j["window_seconds"] = cfg.window_seconds;
  j["request_period_seconds"] = cfg.request_period_seconds;
  j["priority"] = {{"theta", cfg.priority.theta},
                   {"ep_base", cfg.priority.ep_base},
                   {"lp_base", cfg.priority.lp_base},
                   {"min_exponent", cfg.priority.min_exponent}};
  j["stream"] = {{"layers", cfg.stream.layers},
                 {"layer_rate_kbps", cfg.stream.layer_rate_kbps},
                 {"chunk_size_kbits", cfg.stream.chunk_size_kbits}};
  j["bandwidth_classes"] = nlohmann::ordered_json::array();
  for (const BandwidthClass& c : cfg.bandwidth_classes)
    j["bandwidth_classes"].push_back(
        {{"fraction", c.fraction}, {"download_kbps", c.download_kbps}});
  return j;
}

inline std::uint64_t config_hash(const SimConfig& cfg) {
  const std::string dump = config_to_json(cfg).dump();
  std::uint64_t h = 14695981039346656037ull;  // FNV-1a 64-bit
  for (unsigned char ch : dump) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace pullsched
