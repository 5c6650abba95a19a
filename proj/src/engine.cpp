#include "logdos/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <limits>
#include <queue>
#include <stdexcept>
#include <thread>

#include <fmt/format.h>

#include "logdos/analysis.hpp"
#include "logdos/rng.hpp"

namespace logdos {

namespace stream {
constexpr std::uint64_t kSelection = 1;
constexpr std::uint64_t kPids = 2;
constexpr std::uint64_t kRouter = 3;
constexpr std::uint64_t kRefill = 4;
constexpr std::uint64_t kAttack = 5;
constexpr std::uint64_t kBackground = 6;
constexpr std::uint64_t kCatalog = 7;
}  // namespace stream

void ScenarioConfig::validate() const {
  auto fail = [](const char* field, const std::string& why) {
    throw std::invalid_argument(fmt::format("{}: {}", field, why));
  };
  if (!(target_fp > 0.0 && target_fp < 1.0)) fail("target_fp", "must be in (0, 1)");
  if (hash_count < 1) fail("hash_count", "must be >= 1");
  if (filter_capacity < 1) fail("filter_capacity", "must be >= 1");
  if (num_attack_ases < 1) fail("num_attack_ases", "must be >= 1");
  if (!(aggregate_attack_mbps >= 0.0)) fail("aggregate_attack_mbps", "must be >= 0");
  if (packets_per_attacker < 1) fail("packets_per_attacker", "must be >= 1");
  if (horizon_ticks < 1) fail("horizon_ticks", "must be >= 1");
  if (tick_ms < 1) fail("tick_ms", "must be >= 1");
  if (per_hop_ticks < 0) fail("per_hop_ticks", "must be >= 0");
  if (runs < 1) fail("runs", "must be >= 1");
  if (topology.kind == TopologySource::Kind::Synthetic) {
    if (topology.nodes < 2) fail("topology.nodes", "must be >= 2");
    if (topology.attachment < 1) fail("topology.attachment", "must be >= 1");
  } else if (topology.path.empty()) {
    fail("topology.path", "required for file topologies");
  }
  try {
    dynamic.validate();
  } catch (const std::invalid_argument& e) {
    fail("dynamic", e.what());
  }
  if (!(dpid.update_period_s > 0.0)) fail("dpid.update_period_s", "must be > 0");
  if (!(dpid.lambda_per_min >= 0.0)) fail("dpid.lambda_per_min", "must be >= 0");
  if (!(dpid.horizon_s > 0.0)) fail("dpid.horizon_s", "must be > 0");
  for (double p : dpid.even_fp)
    if (!(p > 0.0 && p < 1.0)) fail("dpid.even_fp", "entries must be in (0, 1)");
  if (!(background.prefill_fraction >= 0.0 && background.prefill_fraction <= 1.0))
    fail("background.prefill_fraction", "must be in [0, 1]");
  if (!(background.live_get_rate >= 0.0)) fail("background.live_get_rate", "must be >= 0");
  if (background.catalog_size < 1) fail("background.catalog_size", "must be >= 1");
}

Topology load_topology(const TopologySource& source) {
  if (source.kind == TopologySource::Kind::Synthetic)
    return generate_synthetic(source.nodes, source.attachment, source.seed);
  std::ifstream in(source.path);
  if (!in) throw std::ios_base::failure("cannot open edge list " + source.path);
  Topology t = load_edge_list(in);
  if (!source.metadata_path.empty()) {
    std::ifstream meta(source.metadata_path);
    if (!meta) throw std::ios_base::failure("cannot open metadata " + source.metadata_path);
    load_metadata(meta, t);
  }
  return t;
}

namespace {

MetricSummary summarize(const std::vector<RunMetrics>& runs, double RunMetrics::*field) {
  MetricSummary s;
  if (runs.empty()) return s;
  for (const auto& r : runs) s.mean += r.*field;
  s.mean /= static_cast<double>(runs.size());
  if (runs.size() > 1) {
    double ss = 0.0;
    for (const auto& r : runs) ss += (r.*field - s.mean) * (r.*field - s.mean);
    s.stddev = std::sqrt(ss / static_cast<double>(runs.size() - 1));
  }
  return s;
}

MetricSummary summarize(const std::vector<RunMetrics>& runs,
                        std::uint64_t RunMetrics::*field) {
  MetricSummary s;
  if (runs.empty()) return s;
  for (const auto& r : runs) s.mean += static_cast<double>(r.*field);
  s.mean /= static_cast<double>(runs.size());
  if (runs.size() > 1) {
    double ss = 0.0;
    for (const auto& r : runs) {
      const double d = static_cast<double>(r.*field) - s.mean;
      ss += d * d;
    }
    s.stddev = std::sqrt(ss / static_cast<double>(runs.size() - 1));
  }
  return s;
}

}  // namespace

AggregateMetrics aggregate(std::vector<RunMetrics> runs) {
  AggregateMetrics agg;
  agg.sent = summarize(runs, &RunMetrics::sent);
  agg.reached = summarize(runs, &RunMetrics::reached);
  agg.reach_fraction = summarize(runs, &RunMetrics::reach_fraction);
  agg.filtered_fraction = summarize(runs, &RunMetrics::filtered_fraction);
  agg.victim_mbps = summarize(runs, &RunMetrics::victim_mbps);
  agg.legit_sent = summarize(runs, &RunMetrics::legit_sent);
  agg.legit_dropped = summarize(runs, &RunMetrics::legit_dropped);
  agg.storage_bits_per_as = summarize(runs, &RunMetrics::storage_bits_per_as);
  agg.expected_reach_fraction = summarize(runs, &RunMetrics::expected_reach_fraction);
  agg.runs = std::move(runs);
  return agg;
}

RunContext::RunContext(const ScenarioConfig& cfg, const Topology& topology,
                       std::uint64_t run_index)
    : cfg_(&cfg), topology_(&topology), run_index_(run_index), seed_(cfg.run_seed(run_index)) {}

RouterState& RunContext::router(AsId as) {
  if (auto it = routers_.find(as); it != routers_.end()) return it->second;

  const ScenarioConfig& cfg = *cfg_;
  Rng rng = derive_rng(seed_, stream::kRouter, as.value);
  std::optional<RotatingFilterPair> filters;
  if (uses_filters(cfg.strategy)) {
    filters = RotatingFilterPair::sized_for(cfg.filter_capacity, cfg.target_fp, cfg.hash_count,
                                            rng());
  }
  Tick phase = 0;
  if (cfg.strategy == StrategyKind::Dynamic) {
    phase = static_cast<Tick>(uniform_below(
        rng, static_cast<std::uint64_t>(cfg.dynamic.initial_duration + cfg.dynamic.silent_period)));
  }
  RouterState state(cfg.strategy, std::move(filters), seed_, cfg.dynamic, phase);
  const auto prefill = static_cast<std::uint64_t>(
      std::llround(cfg.background.prefill_fraction * static_cast<double>(cfg.filter_capacity)));
  state.prefill(prefill, rng);
  if (cfg.strategy == StrategyKind::Dynamic && cfg.dynamic_refill && prefill > 0)
    state.set_refill(Refill{prefill, derive_rng(seed_, stream::kRefill, as.value)});
  return routers_.emplace(as, std::move(state)).first->second;
}

const RouterState* RunContext::find_router(AsId as) const {
  auto it = routers_.find(as);
  return it == routers_.end() ? nullptr : &it->second;
}

void RunContext::install_router(AsId as, RouterState state) {
  routers_.insert_or_assign(as, std::move(state));
}

std::uint64_t RunContext::storage_bits_per_as() const {
  if (!uses_filters(cfg_->strategy)) return 0;
  return 2 * size_for(cfg_->filter_capacity, cfg_->target_fp, cfg_->hash_count);
}

std::uint64_t RunContext::current_epoch(Tick now) const {
  const double period_ticks = cfg_->dpid.update_period_s * 1000.0 / cfg_->tick_ms;
  return static_cast<std::uint64_t>(std::floor(static_cast<double>(now) / period_ticks));
}

RunContext setup_run(const ScenarioConfig& cfg, const Topology& topology,
                     std::uint64_t run_index) {
  cfg.validate();
  RunContext ctx(cfg, topology, run_index);
  const std::uint64_t seed = ctx.seed();

  std::vector<AsId> eligible;
  for (AsId id : topology.nodes()) {
    if (!cfg.transient_only || topology.class_of(id) == AsClass::Transient)
      eligible.push_back(id);
  }
  if (cfg.transient_only && !topology.has_metadata())
    throw std::invalid_argument("transient_only requires AS metadata");
  if (eligible.size() < cfg.num_attack_ases + 1)
    throw std::invalid_argument(fmt::format("need {} eligible ASes, topology has {}",
                                            cfg.num_attack_ases + 1, eligible.size()));

  Rng rng = derive_rng(seed, stream::kSelection);
  constexpr int kVictimAttempts = 16;
  bool done = false;
  for (int attempt = 0; attempt < kVictimAttempts && !done; ++attempt) {
    std::vector<AsId> pool = eligible;
    const std::size_t v = uniform_below(rng, pool.size());
    const AsId victim = pool[v];
    pool[v] = pool.back();
    pool.pop_back();

    const auto dist = bfs_distances(topology, topology.require_index(victim));
    std::vector<AsId> attackers;
    // Partial Fisher-Yates: draw without replacement, skipping ASes that
    // cannot reach the victim.
    for (std::size_t i = 0; i < pool.size() && attackers.size() < cfg.num_attack_ases; ++i) {
      const std::size_t j = i + uniform_below(rng, pool.size() - i);
      std::swap(pool[i], pool[j]);
      if (dist[topology.require_index(pool[i])] > 0) attackers.push_back(pool[i]);
    }
    if (attackers.size() < cfg.num_attack_ases) continue;

    ctx.victim = victim;
    ctx.routes.clear();
    for (AsId a : attackers) {
      AttackRoute route;
      route.attacker = a;
      route.get_path = shortest_path(topology, a, victim);
      std::reverse(route.get_path.begin(), route.get_path.end());
      ctx.routes.push_back(std::move(route));
    }
    done = true;
  }
  if (!done)
    throw std::runtime_error(fmt::format("no victim with {} reachable attackers after {} draws",
                                         cfg.num_attack_ases, kVictimAttempts));

  ctx.pids = PidMap::assign(topology, derive_rng(seed, stream::kPids)());
  for (auto& route : ctx.routes) route.pids = pids_along(ctx.pids, route.get_path);

  Rng catalog_rng = derive_rng(seed, stream::kCatalog);
  ctx.catalog.reserve(cfg.background.catalog_size);
  for (std::size_t i = 0; i < cfg.background.catalog_size; ++i) {
    const std::uint64_t hi = catalog_rng();
    ctx.catalog.push_back(ServiceId{hi, catalog_rng()});
  }

  std::vector<AsId> on_routes;
  for (const auto& route : ctx.routes)
    on_routes.insert(on_routes.end(), route.get_path.begin(), route.get_path.end());
  std::sort(on_routes.begin(), on_routes.end());
  on_routes.erase(std::unique(on_routes.begin(), on_routes.end()), on_routes.end());
  for (AsId as : on_routes) ctx.router(as);
  return ctx;
}

std::vector<AttackPacket> plan_attack(RunContext& ctx) {
  const ScenarioConfig& cfg = ctx.config();
  Rng rng = derive_rng(ctx.seed(), stream::kAttack);
  std::vector<AttackPacket> packets;
  packets.reserve(ctx.routes.size() * cfg.packets_per_attacker);
  for (std::uint32_t r = 0; r < ctx.routes.size(); ++r) {
    for (std::uint64_t i = 0; i < cfg.packets_per_attacker; ++i) {
      AttackPacket pkt;
      pkt.route = r;
      if (cfg.attack_sid == AttackSid::Copied) {
        pkt.sid = ctx.catalog[uniform_below(rng, ctx.catalog.size())];
      } else {
        const std::uint64_t hi = rng();
        pkt.sid = ServiceId{hi, rng()};
      }
      pkt.send_tick = static_cast<Tick>(uniform_below(rng, static_cast<std::uint64_t>(cfg.horizon_ticks)));
      packets.push_back(pkt);
    }
  }
  return packets;
}

std::vector<LegitFlow> plan_background(RunContext& ctx) {
  const ScenarioConfig& cfg = ctx.config();
  const double seconds = static_cast<double>(cfg.horizon_ticks) * cfg.tick_ms / 1000.0;
  const auto count = static_cast<std::uint64_t>(std::llround(cfg.background.live_get_rate * seconds));
  const auto nodes = ctx.topology().nodes();
  std::vector<LegitFlow> flows;
  if (nodes.size() < 2) return flows;
  Rng rng = derive_rng(ctx.seed(), stream::kBackground);
  flows.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    LegitFlow f;
    const std::size_t c = uniform_below(rng, nodes.size());
    std::size_t p = uniform_below(rng, nodes.size() - 1);
    if (p >= c) ++p;
    f.consumer = nodes[c];
    f.provider = nodes[p];
    f.issue_tick = static_cast<Tick>(uniform_below(rng, static_cast<std::uint64_t>(cfg.horizon_ticks)));
    f.sid = ctx.catalog[uniform_below(rng, ctx.catalog.size())];
    flows.push_back(f);
  }
  return flows;
}

namespace {

enum class EventType : std::uint8_t { Attack, LegitGet, LegitData };

struct Event {
  Tick tick;
  std::uint64_t seq;
  std::uint32_t item;
  std::uint32_t hop;
  EventType type;
};

struct Later {
  bool operator()(const Event& a, const Event& b) const {
    return a.tick != b.tick ? a.tick > b.tick : a.seq > b.seq;
  }
};

struct FlowState {
  std::vector<AsId> path;  // consumer -> provider
  std::vector<PathId> pids;
  std::uint64_t epoch = 0;
};

}  // namespace

TrafficOutcome simulate(RunContext& ctx, const TrafficPlan& plan) {
  const ScenarioConfig& cfg = ctx.config();
  const Tick hop_delay = cfg.per_hop_ticks;
  const bool dpid = cfg.strategy == StrategyKind::DPid;
  TrafficOutcome out;

  std::vector<FlowState> flows(plan.flows.size());
  for (std::size_t i = 0; i < plan.flows.size(); ++i) {
    const LegitFlow& f = plan.flows[i];
    flows[i].path = shortest_path(ctx.topology(), f.consumer, f.provider);
    flows[i].pids = pids_along(ctx.pids, flows[i].path);
    flows[i].epoch = dpid ? ctx.current_epoch(f.issue_tick) : 0;
  }

  std::uint64_t seq = 0;
  std::vector<Event> initial;
  initial.reserve(plan.attacks.size() + plan.flows.size());
  for (std::uint32_t i = 0; i < plan.attacks.size(); ++i)
    initial.push_back({plan.attacks[i].send_tick, seq++, i, 0, EventType::Attack});
  for (std::uint32_t i = 0; i < plan.flows.size(); ++i)
    initial.push_back({plan.flows[i].issue_tick, seq++, i, 0, EventType::LegitGet});
  std::priority_queue<Event, std::vector<Event>, Later> queue(Later{}, std::move(initial));

  out.sent = plan.attacks.size();
  out.legit_sent = plan.flows.size();

  // DATA walking `path` backwards from its last AS. Hop 0 is the origin AS,
  // which checks the full list; later hops strip their own PathId first.
  // Returns the verdict at this hop, or nullopt for a malformed packet.
  auto data_hop = [&](std::span<const AsId> path, std::span<const PathId> pids,
                      std::uint32_t hop, const ServiceId& sid, std::uint64_t epoch,
                      Tick now) -> std::optional<Verdict> {
    std::size_t len = pids.size();
    if (hop > 0) {
      if (len < hop) return std::nullopt;
      len -= hop;
    }
    const AsId at = path[path.size() - 1 - hop];
    return ctx.router(at).on_data(sid, pids.first(len), now, epoch,
                                  dpid ? ctx.current_epoch(now) : 0);
  };

  while (!queue.empty()) {
    const Event ev = queue.top();
    queue.pop();
    switch (ev.type) {
      case EventType::Attack: {
        const AttackPacket& pkt = plan.attacks[ev.item];
        const AttackRoute& route = ctx.routes.at(pkt.route);
        auto verdict =
            data_hop(route.get_path, route.pids, ev.hop, pkt.sid, pkt.pid_epoch, ev.tick);
        if (!verdict) {
          ++out.malformed;
        } else if (*verdict == Verdict::Reject) {
          ++out.rejected;
        } else if (ev.hop + 1 == route.get_path.size()) {
          ++out.reached;
        } else {
          queue.push({ev.tick + hop_delay, seq++, ev.item, ev.hop + 1, EventType::Attack});
        }
        break;
      }
      case EventType::LegitGet: {
        const FlowState& f = flows[ev.item];
        const auto prefix = std::span<const PathId>(f.pids).first(ev.hop);
        ctx.router(f.path[ev.hop]).on_get(plan.flows[ev.item].sid, prefix, ev.tick);
        if (ev.hop + 1 == f.path.size()) {
          queue.push({ev.tick, seq++, ev.item, 0, EventType::LegitData});
        } else {
          queue.push({ev.tick + hop_delay, seq++, ev.item, ev.hop + 1, EventType::LegitGet});
        }
        break;
      }
      case EventType::LegitData: {
        const FlowState& f = flows[ev.item];
        auto verdict = data_hop(f.path, f.pids, ev.hop, plan.flows[ev.item].sid, f.epoch, ev.tick);
        if (!verdict || *verdict == Verdict::Reject) {
          ++out.legit_dropped;
        } else if (ev.hop + 1 == f.path.size()) {
          ++out.legit_delivered;
        } else {
          queue.push({ev.tick + hop_delay, seq++, ev.item, ev.hop + 1, EventType::LegitData});
        }
        break;
      }
    }
  }
  return out;
}

TrafficOutcome inject_attack(RunContext& ctx) { return simulate(ctx, {plan_attack(ctx), {}}); }

TrafficOutcome simulate_background(RunContext& ctx) {
  return simulate(ctx, {{}, plan_background(ctx)});
}

namespace {

double analytic_reach(const RunContext& ctx) {
  const StrategyKind kind = ctx.config().strategy;
  if (kind == StrategyKind::Dynamic || kind == StrategyKind::DPid)
    return std::numeric_limits<double>::quiet_NaN();
  std::vector<std::size_t> lengths;
  for (const auto& r : ctx.routes) lengths.push_back(r.get_path.size());
  return expected_reach_fraction(lengths, kind, ctx.config().target_fp);
}

RunMetrics to_metrics(const RunContext& ctx, const TrafficOutcome& out) {
  const ScenarioConfig& cfg = ctx.config();
  RunMetrics m;
  m.run_index = ctx.run_index();
  m.seed = ctx.seed();
  m.sent = out.sent;
  m.reached = out.reached;
  m.rejected = out.rejected;
  m.malformed = out.malformed;
  m.legit_sent = out.legit_sent;
  m.legit_dropped = out.legit_dropped;
  m.storage_bits_per_as = ctx.storage_bits_per_as();
  m.reach_fraction =
      out.sent == 0 ? 0.0 : static_cast<double>(out.reached) / static_cast<double>(out.sent);
  m.filtered_fraction = 1.0 - m.reach_fraction;
  m.victim_mbps = cfg.aggregate_attack_mbps * m.reach_fraction;
  m.expected_reach_fraction = analytic_reach(ctx);
  return m;
}

}  // namespace

RunMetrics execute_run(const ScenarioConfig& cfg, const Topology& topology,
                       std::uint64_t run_index) {
  if (cfg.strategy == StrategyKind::DPid) return execute_dpid_run(cfg, topology, run_index);
  RunContext ctx = setup_run(cfg, topology, run_index);
  TrafficPlan plan{plan_attack(ctx), plan_background(ctx)};
  return to_metrics(ctx, simulate(ctx, plan));
}

namespace detail {

template <typename RunFn>
AggregateMetrics run_all(const ScenarioConfig& cfg, unsigned threads, RunFn&& fn) {
  cfg.validate();
  std::vector<RunMetrics> results(cfg.runs);
  const unsigned workers =
      static_cast<unsigned>(std::clamp<std::uint64_t>(threads, 1, cfg.runs));
  if (workers == 1) {
    for (std::uint64_t i = 0; i < cfg.runs; ++i) results[i] = fn(i);
    return aggregate(std::move(results));
  }
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::uint64_t i = next++; i < cfg.runs && !failed; i = next++) {
          try {
            results[i] = fn(i);
          } catch (...) {
            if (!failed.exchange(true)) error = std::current_exception();
          }
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);
  return aggregate(std::move(results));
}

}  // namespace detail

AggregateMetrics run_scenario(const ScenarioConfig& cfg, const Topology& topology,
                              unsigned threads) {
  return detail::run_all(cfg, threads,
                         [&](std::uint64_t i) { return execute_run(cfg, topology, i); });
}

AggregateMetrics run_dpid(const ScenarioConfig& cfg, const Topology& topology,
                          unsigned threads) {
  if (cfg.strategy != StrategyKind::DPid)
    throw std::invalid_argument("run_dpid requires strategy dpid");
  return detail::run_all(cfg, threads,
                         [&](std::uint64_t i) { return execute_dpid_run(cfg, topology, i); });
}

}  // namespace logdos
