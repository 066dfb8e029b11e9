#include "pullsched/config.hpp"

#include <string>
#include <vector>

#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

using namespace pullsched;
using nlohmann::json;

namespace {

json minimal() {
  return json{{"node_count", 10},
              {"degree", 4},
              {"duration_ticks", 30},
              {"window_seconds", 10},
              {"stream", {{"layers", 1}, {"layer_rate_kbps", 500}, {"chunk_size_kbits", 10}}},
              {"bandwidth_classes", json::array({{{"fraction", 1.0}, {"download_kbps", 2048}}})}};
}

// Expects parse_config to throw and the message to mention `needle`.
void expect_parse_error(const json& doc, const std::string& needle) {
  try {
    parse_config(doc);
    FAIL() << "no error for " << needle;
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find(needle), std::string::npos)
        << "message was: " << e.what();
  }
}

}  // namespace

TEST(Config, MinimalDocumentAndDefaults) {
  const SimConfig cfg = parse_config(minimal());
  EXPECT_EQ(cfg.node_count, 10u);
  EXPECT_EQ(cfg.degree, 4);
  EXPECT_EQ(cfg.seed, 1u);
  EXPECT_EQ(cfg.duration_ticks, 30);
  EXPECT_EQ(cfg.strategy, Strategy::kNassched);
  EXPECT_EQ(cfg.request_period_seconds, 1);
  EXPECT_EQ(cfg.stream.layers, 1);
  EXPECT_EQ(cfg.stream.layer_rate_kbps, (std::vector<int>{500}));
  EXPECT_DOUBLE_EQ(cfg.priority.ep_base, 10.0);
  EXPECT_DOUBLE_EQ(cfg.priority.lp_base, 10.0);
  EXPECT_EQ(cfg.priority.min_exponent, -30);
  EXPECT_EQ(cfg.priority.max_layer, 1);
  // Single layer: no layer term.
  EXPECT_DOUBLE_EQ(cfg.priority.theta, 0.0);
}

TEST(Config, DerivedQuantities) {
  SimConfig cfg = parse_config(minimal());
  EXPECT_EQ(cfg.stream.total_rate_kbps(), 500);
  EXPECT_EQ(cfg.stream.chunks_per_tick(), 50);
  EXPECT_EQ(cfg.stream.layer_chunks_per_tick(1), 50);
  EXPECT_EQ(cfg.window_ticks(), 10);
  EXPECT_EQ(cfg.download_chunks(0), 204);
  EXPECT_EQ(cfg.upload_chunks(0), 102);
  EXPECT_EQ(cfg.source_upload_chunks(), 200);

  cfg.bandwidth_classes[0].download_kbps = 15;  // below one chunk per tick
  EXPECT_EQ(cfg.download_chunks(0), 1);
  EXPECT_EQ(cfg.upload_chunks(0), 1);
}

TEST(Config, ScalarRateReplicatesAcrossLayers) {
  json doc = minimal();
  doc["stream"]["layers"] = 3;
  doc["stream"]["layer_rate_kbps"] = 100;
  const SimConfig cfg = parse_config(doc);
  EXPECT_EQ(cfg.stream.layer_rate_kbps, (std::vector<int>{100, 100, 100}));
  EXPECT_EQ(cfg.stream.chunks_per_tick(), 30);
}

TEST(Config, MultiLayerThetaDefaultsToLpPower) {
  json doc = minimal();
  doc["stream"]["layers"] = 3;
  doc["stream"]["layer_rate_kbps"] = json::array({100, 100, 100});
  const SimConfig cfg = parse_config(doc);
  EXPECT_DOUBLE_EQ(cfg.priority.theta, 1e-3);
}

TEST(Config, ThetaStrings) {
  json doc = minimal();
  doc["stream"]["layers"] = 2;
  doc["stream"]["layer_rate_kbps"] = json::array({100, 100});
  doc["priority"] = {{"theta", "conservative"}};
  EXPECT_DOUBLE_EQ(parse_config(doc).priority.theta, 1.0 / 9.0);
  doc["priority"]["theta"] = "default";
  EXPECT_DOUBLE_EQ(parse_config(doc).priority.theta, 0.01);
  doc["priority"]["theta"] = 0.5;
  EXPECT_DOUBLE_EQ(parse_config(doc).priority.theta, 0.5);
  doc["priority"]["theta"] = "sometimes";
  expect_parse_error(doc, "theta");
}

TEST(Config, UnknownKeysAreRejectedWithPath) {
  json doc = minimal();
  doc["nodes"] = 10;
  expect_parse_error(doc, "unknown key \"nodes\"");

  doc = minimal();
  doc["stream"]["bitrate"] = 100;
  expect_parse_error(doc, "unknown key \"stream.bitrate\"");

  doc = minimal();
  doc["priority"] = {{"tetha", 1.0}};  // mistyped key
  expect_parse_error(doc, "unknown key");

  doc = minimal();
  doc["bandwidth_classes"][0]["upload_kbps"] = 512;
  expect_parse_error(doc, "bandwidth_classes[].upload_kbps");
}

TEST(Config, ValidationFailures) {
  json doc = minimal();
  doc["degree"] = 10;
  expect_parse_error(doc, "degree");

  doc = minimal();
  doc["node_count"] = 1;
  doc["degree"] = 1;  // degree range is checked against node_count
  expect_parse_error(doc, "node_count");

  doc = minimal();
  doc["request_period_seconds"] = 2;
  expect_parse_error(doc, "request_period_seconds");

  doc = minimal();
  doc["stream"]["layer_rate_kbps"] = 505;
  expect_parse_error(doc, "whole number of chunks");

  doc = minimal();
  doc["stream"]["layers"] = 2;  // rate list length 1 now mismatches
  doc["stream"]["layer_rate_kbps"] = json::array({100});
  expect_parse_error(doc, "one rate per layer");

  doc = minimal();
  doc["bandwidth_classes"][0]["fraction"] = 0.9;
  expect_parse_error(doc, "sum to 1.0");

  doc = minimal();
  doc["bandwidth_classes"] = json::array();
  expect_parse_error(doc, "non-empty");

  doc = minimal();
  doc["duration_ticks"] = -1;
  expect_parse_error(doc, "duration_ticks");
}

TEST(Config, RoundTripThroughJson) {
  json doc = minimal();
  doc["seed"] = 42;
  doc["strategy"] = "assched";
  doc["priority"] = {{"theta", 0.25}, {"ep_base", 2.0}};
  const SimConfig a = parse_config(doc);
  const SimConfig b = parse_config(json::parse(config_to_json(a).dump()));
  EXPECT_EQ(config_to_json(a).dump(), config_to_json(b).dump());
  EXPECT_EQ(config_hash(a), config_hash(b));
}

TEST(Config, HashSeparatesConfigs) {
  const SimConfig a = parse_config(minimal());
  json doc = minimal();
  doc["seed"] = 2;
  const SimConfig b = parse_config(doc);
  EXPECT_NE(config_hash(a), config_hash(b));
  EXPECT_EQ(config_hash(a), config_hash(parse_config(minimal())));
}
