#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "logdos/config.hpp"

using namespace logdos;

namespace {

std::string error_key(const std::string& text) {
  try {
    parse_config_text(text);
  } catch (const ConfigError& e) {
    return e.key_path();
  }
  return "";
}

}  // namespace

TEST_CASE("minimal config takes every default") {
  auto spec = parse_config_text("strategy: even\ntopology:\n  source: synthetic\n");
  const ScenarioConfig def;
  const auto& c = spec.base;
  CHECK(c.strategy == StrategyKind::Even);
  CHECK(c.topology.kind == TopologySource::Kind::Synthetic);
  CHECK(c.topology.nodes == def.topology.nodes);
  CHECK(c.target_fp == def.target_fp);
  CHECK(c.hash_count == def.hash_count);
  CHECK(c.filter_capacity == def.filter_capacity);
  CHECK(c.num_attack_ases == def.num_attack_ases);
  CHECK(c.packets_per_attacker == def.packets_per_attacker);
  CHECK(c.horizon_ticks == def.horizon_ticks);
  CHECK(c.per_hop_ticks == def.per_hop_ticks);
  CHECK(c.master_seed == def.master_seed);
  CHECK(c.dynamic.initial_duration == def.dynamic.initial_duration);
  CHECK(c.dynamic.threshold == def.dynamic.threshold);
  CHECK(c.dpid.lambda_per_min == def.dpid.lambda_per_min);
  CHECK(c.background.prefill_fraction == def.background.prefill_fraction);
  CHECK(spec.sweep.empty());
  CHECK(spec.points().size() == 1);
  CHECK(spec.storage.n_values.size() == 4);
  CHECK(spec.topostats_samples == 1000);
}

TEST_CASE("full config") {
  auto spec = parse_config_text(R"(
name: demo
strategy: dynamic
target_fp: 0.05
hash_count: 4
filter_capacity: 500
num_attack_ases: 7
aggregate_attack_mbps: 100
packets_per_attacker: 20
horizon_ticks: 1000
tick_ms: 2
per_hop_ticks: 3
runs: 4
master_seed: 99
transient_only: false
attack_sid: copied
topology: {nodes: 50, attachment: 3, seed: 8}
dynamic:
  initial_duration_ticks: 40
  silent_period_ticks: 30
  validation_shift_ticks: 5
  threshold: 2
  refill_on_reset: false
dpid: {update_period_s: 120, lambda_per_min: 2, horizon_s: 600, even_fp: [0.1]}
background: {prefill_fraction: 0.5, live_get_rate: 3, catalog_size: 16}
storage: {n_values: [10, 20], p_values: [0.01], hash_count: 5}
topostats: {sample_pairs: 77}
)");
  const auto& c = spec.base;
  CHECK(c.name == "demo");
  CHECK(c.strategy == StrategyKind::Dynamic);
  CHECK(c.hash_count == 4);
  CHECK(c.tick_ms == 2);
  CHECK(c.attack_sid == AttackSid::Copied);
  CHECK(c.topology.attachment == 3);
  CHECK(c.dynamic.silent_period == 30);
  CHECK_FALSE(c.dynamic_refill);
  CHECK(c.dpid.even_fp == std::vector<double>{0.1});
  CHECK(c.background.catalog_size == 16);
  CHECK(spec.storage.hash_count == 5);
  CHECK(spec.topostats_samples == 77);
}

TEST_CASE("sweep is a cross product") {
  auto spec = parse_config_text(R"(
name: grid
sweep:
  target_fp: [1.0e-4, 1.0e-3, 1.0e-2, 5.0e-2]
  num_attack_ases: [10, 20, 40, 80, 160]
)");
  auto points = spec.points();
  REQUIRE(points.size() == 20);
  CHECK(points[0].target_fp == 1e-4);
  CHECK(points[0].num_attack_ases == 10);
  CHECK(points[1].num_attack_ases == 20);
  CHECK(points[5].target_fp == 1e-3);
  CHECK(points[19].target_fp == 5e-2);
  CHECK(points[19].num_attack_ases == 160);
  CHECK(points[0].name == "grid-0");
  CHECK(points[19].name == "grid-19");
}

TEST_CASE("invalid values name their key") {
  CHECK(error_key("target_fp: 1.5\n") == "target_fp");
  CHECK(error_key("sweep:\n  target_fp: [0.1, 1.5]\n") == "sweep.target_fp");
  CHECK(error_key("strategy: sometimes\n") == "strategy");
  CHECK(error_key("runs: 0\n") == "runs");
  CHECK(error_key("dynamic:\n  threshold: 0\n") == "dynamic");
  CHECK(error_key("background:\n  prefill_fraction: 3\n") == "background.prefill_fraction");
  CHECK(error_key("storage:\n  p_values: [2]\n") == "storage.p_values");
  CHECK(error_key("hash_count: three\n") == "hash_count");
  CHECK(error_key("topology: [1, 2]\n") == "topology");
}

TEST_CASE("unknown keys are rejected with their line") {
  try {
    parse_config_text("name: x\nbogus: 1\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.key_path() == "bogus");
    CHECK(e.line() == 2);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  CHECK(error_key("dpid:\n  lambda: 3\n") == "dpid.lambda");
}

TEST_CASE("malformed YAML") {
  CHECK(error_key("name: [unclosed\n") == "<yaml>");
}

TEST_CASE("files and relative paths") {
  const auto dir = std::filesystem::temp_directory_path() / "logdos_config_test";
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / "exp.yaml");
    out << "topology:\n  path: edges.txt\n  metadata: /abs/meta.txt\n";
  }
  auto spec = parse_config(dir / "exp.yaml");
  CHECK(spec.base.topology.kind == TopologySource::Kind::File);
  CHECK(spec.base.topology.path == (dir / "edges.txt").string());
  CHECK(spec.base.topology.metadata_path == "/abs/meta.txt");
  CHECK_THROWS_AS(parse_config(dir / "missing.yaml"), std::ios_base::failure);
  std::filesystem::remove_all(dir);
}
