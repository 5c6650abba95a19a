#include <algorithm>
#include <cmath>
#include <limits>

#include "logdos/engine.hpp"
#include "logdos/rng.hpp"

namespace logdos {

namespace {
constexpr std::uint64_t kLearningStream = 8;
constexpr std::uint64_t kNeverLearned = std::numeric_limits<std::uint64_t>::max();
}  // namespace

double dpid_valid_fraction(Rng& rng, double lambda_per_min, double update_period_s,
                           double horizon_s, std::vector<double>* learn_times) {
  if (learn_times) learn_times->clear();
  if (lambda_per_min <= 0.0) return 0.0;
  const double rate = lambda_per_min / 60.0;
  double valid = 0.0;
  double covered_until = 0.0;  // end of the period whose first event was seen
  for (double t = exponential(rng, rate); t < horizon_s; t += exponential(rng, rate)) {
    if (learn_times) learn_times->push_back(t);
    if (t < covered_until) continue;
    const double period_end = (std::floor(t / update_period_s) + 1.0) * update_period_s;
    covered_until = period_end;
    valid += std::min(period_end, horizon_s) - t;
  }
  return valid / horizon_s;
}

RunMetrics execute_dpid_run(const ScenarioConfig& base, const Topology& topology,
                            std::uint64_t run_index) {
  ScenarioConfig cfg = base;
  cfg.strategy = StrategyKind::DPid;
  cfg.horizon_ticks = std::max<Tick>(
      1, static_cast<Tick>(std::llround(cfg.dpid.horizon_s * 1000.0 / cfg.tick_ms)));

  RunContext ctx = setup_run(cfg, topology, run_index);
  TrafficPlan plan{plan_attack(ctx), plan_background(ctx)};

  const double seconds_per_tick = cfg.tick_ms / 1000.0;
  double fraction_sum = 0.0;
  std::vector<std::vector<double>> learned(ctx.routes.size());
  for (std::size_t r = 0; r < ctx.routes.size(); ++r) {
    Rng rng = derive_rng(ctx.seed(), kLearningStream, r);
    fraction_sum += dpid_valid_fraction(rng, cfg.dpid.lambda_per_min, cfg.dpid.update_period_s,
                                        cfg.dpid.horizon_s, &learned[r]);
  }
  // Each packet carries the epoch of the newest path its attacker had
  // learned when sending.
  for (AttackPacket& pkt : plan.attacks) {
    const auto& times = learned[pkt.route];
    const double t = static_cast<double>(pkt.send_tick) * seconds_per_tick;
    auto it = std::upper_bound(times.begin(), times.end(), t);
    pkt.pid_epoch = it == times.begin()
                        ? kNeverLearned
                        : static_cast<std::uint64_t>(std::floor(*std::prev(it) /
                                                                cfg.dpid.update_period_s));
  }

  TrafficOutcome out = simulate(ctx, plan);
  RunMetrics m;
  m.run_index = ctx.run_index();
  m.seed = ctx.seed();
  m.sent = out.sent;
  m.reached = out.reached;
  m.rejected = out.rejected;
  m.malformed = out.malformed;
  m.legit_sent = out.legit_sent;
  m.legit_dropped = out.legit_dropped;
  m.storage_bits_per_as = 0;
  m.reach_fraction =
      out.sent == 0 ? 0.0 : static_cast<double>(out.reached) / static_cast<double>(out.sent);
  m.filtered_fraction = 1.0 - m.reach_fraction;
  const double valid_fraction =
      ctx.routes.empty() ? 0.0 : fraction_sum / static_cast<double>(ctx.routes.size());
  m.victim_mbps = cfg.aggregate_attack_mbps * valid_fraction;
  m.expected_reach_fraction = std::numeric_limits<double>::quiet_NaN();
  return m;
}

}  // namespace logdos
