#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "logdos/ids.hpp"
#include "logdos/strategies.hpp"
#include "logdos/topology.hpp"

namespace logdos {

enum class AttackSid : std::uint8_t { Random, Copied };

struct TopologySource {
  enum class Kind : std::uint8_t { Synthetic, File };
  Kind kind = Kind::Synthetic;
  std::string path;           ///< edge list, Kind::File
  std::string metadata_path;  ///< optional "asid class" file
  std::size_t nodes = 1000;
  std::size_t attachment = 2;
  std::uint64_t seed = 1;
};

struct DpidParams {
  double update_period_s = 60.0;
  double lambda_per_min = 8.0;  ///< full-path learning events per minute per attacker
  double horizon_s = 3600.0;
  std::vector<double> even_fp{0.05, 0.1, 0.2};  ///< comparison points for cmd_dpid
};

struct BackgroundParams {
  double prefill_fraction = 1.0;  ///< of filter_capacity, per AS
  double live_get_rate = 0.0;     ///< legitimate round trips per simulated second
  std::size_t catalog_size = 1024;
};

struct ScenarioConfig {
  std::string name = "scenario";
  TopologySource topology;
  bool transient_only = false;
  StrategyKind strategy = StrategyKind::Comprehensive;
  double target_fp = 0.01;
  unsigned hash_count = 3;
  std::uint64_t filter_capacity = 10'000;
  std::uint64_t num_attack_ases = 100;
  double aggregate_attack_mbps = 3000.0;
  std::uint64_t packets_per_attacker = 10'000;
  Tick horizon_ticks = 300'000;
  std::uint32_t tick_ms = 1;
  Tick per_hop_ticks = 10;
  std::uint64_t runs = 1;
  std::uint64_t master_seed = 1;
  AttackSid attack_sid = AttackSid::Random;
  DynamicParams dynamic;
  bool dynamic_refill = true;
  DpidParams dpid;
  BackgroundParams background;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
  [[nodiscard]] std::uint64_t run_seed(std::uint64_t run_index) const {
    return master_seed ^ run_index;
  }
};

/// Builds or loads the topology a config describes.
Topology load_topology(const TopologySource& source);

struct RunMetrics {
  std::uint64_t run_index = 0;
  std::uint64_t seed = 0;
  std::uint64_t sent = 0;
  std::uint64_t reached = 0;
  std::uint64_t rejected = 0;
  std::uint64_t malformed = 0;
  std::uint64_t legit_sent = 0;
  std::uint64_t legit_dropped = 0;
  std::uint64_t storage_bits_per_as = 0;
  double reach_fraction = 0.0;
  double filtered_fraction = 0.0;
  double victim_mbps = 0.0;
  /// Analytic pass probability averaged over this run's attack paths; NaN
  /// for strategies without a closed form.
  double expected_reach_fraction = 0.0;
};

struct MetricSummary {
  double mean = 0.0;
  double stddev = 0.0;
};

struct AggregateMetrics {
  std::vector<RunMetrics> runs;
  MetricSummary sent, reached, reach_fraction, filtered_fraction, victim_mbps, legit_sent,
      legit_dropped, storage_bits_per_as, expected_reach_fraction;
};

AggregateMetrics aggregate(std::vector<RunMetrics> runs);

/// One attacker's route. `get_path` runs victim -> attacker, i.e. the
/// direction a legitimate GET from the victim would take; `pids` holds the
/// PathIds that GET would accumulate.
struct AttackRoute {
  AsId attacker;
  std::vector<AsId> get_path;
  std::vector<PathId> pids;
};

class RunContext {
 public:
  RunContext(const ScenarioConfig& cfg, const Topology& topology, std::uint64_t run_index);

  [[nodiscard]] const ScenarioConfig& config() const { return *cfg_; }
  [[nodiscard]] const Topology& topology() const { return *topology_; }
  [[nodiscard]] std::uint64_t run_index() const { return run_index_; }
  [[nodiscard]] std::uint64_t seed() const { return seed_; }

  /// Router of `as`, created (and prefilled) on first use. Creation draws
  /// only from a per-AS stream, so the state does not depend on when it
  /// happens.
  RouterState& router(AsId as);
  [[nodiscard]] const RouterState* find_router(AsId as) const;
  /// Replaces the router of `as`; used to script scenarios.
  void install_router(AsId as, RouterState state);

  [[nodiscard]] std::uint64_t storage_bits_per_as() const;
  [[nodiscard]] std::uint64_t current_epoch(Tick now) const;

  AsId victim;
  std::vector<AttackRoute> routes;
  PidMap pids;
  std::vector<ServiceId> catalog;

 private:
  const ScenarioConfig* cfg_;
  const Topology* topology_;
  std::uint64_t run_index_;
  std::uint64_t seed_;
  std::unordered_map<AsId, RouterState> routers_;
};

/// Draws victim and attackers, computes attacker -> victim shortest paths,
/// assigns PathIds and creates (prefilled) routers for every AS on a route.
RunContext setup_run(const ScenarioConfig& cfg, const Topology& topology,
                     std::uint64_t run_index);

struct AttackPacket {
  std::uint32_t route = 0;
  ServiceId sid;
  Tick send_tick = 0;
  std::uint64_t pid_epoch = 0;
};

struct LegitFlow {
  AsId consumer;
  AsId provider;
  Tick issue_tick = 0;
  ServiceId sid;
};

struct TrafficPlan {
  std::vector<AttackPacket> attacks;
  std::vector<LegitFlow> flows;
};

struct TrafficOutcome {
  std::uint64_t sent = 0;
  std::uint64_t reached = 0;
  std::uint64_t rejected = 0;
  std::uint64_t malformed = 0;
  std::uint64_t legit_sent = 0;
  std::uint64_t legit_delivered = 0;
  std::uint64_t legit_dropped = 0;
};

/// packets_per_attacker packets per route at uniform random ticks.
std::vector<AttackPacket> plan_attack(RunContext& ctx);
/// live_get_rate * horizon round trips between random distinct ASes.
std::vector<LegitFlow> plan_background(RunContext& ctx);

/// Runs every packet of `plan` through the routers in tick order. Attack
/// DATA walks attacker -> victim; a legitimate flow is a GET walking
/// consumer -> provider followed by its DATA retracing the path. Each hop
/// takes per_hop_ticks.
TrafficOutcome simulate(RunContext& ctx, const TrafficPlan& plan);

TrafficOutcome inject_attack(RunContext& ctx);
TrafficOutcome simulate_background(RunContext& ctx);

/// Metrics of a single run (attack plus background traffic).
RunMetrics execute_run(const ScenarioConfig& cfg, const Topology& topology,
                       std::uint64_t run_index);

/// All runs, `threads` at a time; results are independent of `threads`.
AggregateMetrics run_scenario(const ScenarioConfig& cfg, const Topology& topology,
                              unsigned threads = 1);

/// Fraction of [0, horizon_s) during which a path learned by a Poisson
/// process of rate lambda_per_min stays valid, given PathIds that change
/// every update_period_s. `learn_times` receives the event times.
double dpid_valid_fraction(Rng& rng, double lambda_per_min, double update_period_s,
                           double horizon_s, std::vector<double>* learn_times = nullptr);

RunMetrics execute_dpid_run(const ScenarioConfig& cfg, const Topology& topology,
                            std::uint64_t run_index);
AggregateMetrics run_dpid(const ScenarioConfig& cfg, const Topology& topology,
                          unsigned threads = 1);

}  // namespace logdos
