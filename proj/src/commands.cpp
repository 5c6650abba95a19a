#include "logdos/commands.hpp"

#include <cmath>
#include <map>

#include <fmt/format.h>

#include "logdos/analysis.hpp"
#include "logdos/bloom.hpp"
#include "logdos/csv.hpp"

namespace logdos {

namespace {

ScenarioConfig with_options(ScenarioConfig cfg, const CommandOptions& opts) {
  if (opts.seed) cfg.master_seed = *opts.seed;
  return cfg;
}

std::string num(double v) { return format_number(v); }
std::string num(std::uint64_t v) { return fmt::format("{}", v); }

void write_rows(CsvWriter& csv, const ScenarioConfig& cfg, const AggregateMetrics& agg) {
  const std::string strategy(to_string(cfg.strategy));
  for (const RunMetrics& r : agg.runs) {
    csv.row({cfg.name, strategy, num(cfg.target_fp), num(std::uint64_t{cfg.hash_count}),
             num(cfg.num_attack_ases), num(cfg.aggregate_attack_mbps), num(r.run_index),
             num(r.seed), num(r.sent), num(r.reached), num(r.filtered_fraction),
             num(r.victim_mbps), num(r.legit_sent), num(r.legit_dropped),
             num(r.storage_bits_per_as)});
  }
  csv.row({cfg.name, strategy, num(cfg.target_fp), num(std::uint64_t{cfg.hash_count}),
           num(cfg.num_attack_ases), num(cfg.aggregate_attack_mbps), "mean",
           num(cfg.master_seed), num(agg.sent.mean), num(agg.reached.mean),
           num(agg.filtered_fraction.mean), num(agg.victim_mbps.mean),
           num(agg.legit_sent.mean), num(agg.legit_dropped.mean),
           num(agg.storage_bits_per_as.mean)});
}

void write_header(std::ostream& out) { out << kRunCsvHeader << '\n'; }

}  // namespace

void cmd_run(const ExperimentSpec& spec, std::ostream& out, const CommandOptions& opts) {
  const ScenarioConfig cfg = with_options(spec.base, opts);
  const Topology topology = load_topology(cfg.topology);
  CsvWriter csv(out);
  write_header(out);
  write_rows(csv, cfg, run_scenario(cfg, topology, opts.threads));
}

void cmd_sweep(const ExperimentSpec& spec, std::ostream& out, const CommandOptions& opts) {
  const Topology topology = load_topology(spec.base.topology);
  CsvWriter csv(out);
  write_header(out);
  for (const ScenarioConfig& point : spec.points()) {
    const ScenarioConfig cfg = with_options(point, opts);
    write_rows(csv, cfg, run_scenario(cfg, topology, opts.threads));
  }
}

void cmd_storage(const ExperimentSpec& spec, std::ostream& out) {
  const StorageSpec& s = spec.storage;
  CsvWriter csv(out);
  csv.row({"n", "p", "k", "m_bits", "m_megabits", "m_megabytes", "note"});
  for (const StorageRow& row : storage_curve(s.n_values, s.p_values, s.hash_count)) {
    const double megabits = static_cast<double>(row.m_bits) / 1e6;
    const double megabytes = static_cast<double>(row.m_bits) / 8e6;
    std::string note;
    if (row.n == 2'000'000 && row.p == 1e-4 && row.k == 3) {
      note = fmt::format(
          "often quoted as about 120 MB; the closed form gives {:.2f} Mbit = {:.2f} MB "
          "(unit of the quoted figure is ambiguous)",
          megabits, megabytes);
    }
    csv.row({num(row.n), num(row.p), num(std::uint64_t{row.k}), num(row.m_bits), num(megabits),
             num(megabytes), note});
  }
}

void cmd_dpid(const ExperimentSpec& spec, std::ostream& out, const CommandOptions& opts) {
  const ScenarioConfig base = with_options(spec.base, opts);
  const Topology topology = load_topology(base.topology);

  std::vector<double> lambdas = spec.sweep.lambda_per_min;
  if (lambdas.empty()) lambdas.push_back(base.dpid.lambda_per_min);
  std::vector<double> periods = spec.sweep.update_period_s;
  if (periods.empty()) periods.push_back(base.dpid.update_period_s);

  // Even logging does not depend on lambda or the update period.
  std::map<double, AggregateMetrics> even;
  for (double p : base.dpid.even_fp) {
    ScenarioConfig cfg = base;
    cfg.strategy = StrategyKind::Even;
    cfg.target_fp = p;
    even.emplace(p, run_scenario(cfg, topology, opts.threads));
  }

  CsvWriter csv(out);
  csv.row({"lambda_per_min", "update_period_s", "attack_ases", "aggregate_mbps",
           "dpid_victim_mbps", "dpid_closed_form_mbps", "even_p", "even_victim_mbps",
           "even_expected_mbps"});
  for (double period : periods) {
    for (double lambda : lambdas) {
      ScenarioConfig cfg = base;
      cfg.strategy = StrategyKind::DPid;
      cfg.dpid.lambda_per_min = lambda;
      cfg.dpid.update_period_s = period;
      const AggregateMetrics dpid = run_dpid(cfg, topology, opts.threads);
      const double closed = dpid_closed_form(lambda, period, cfg.aggregate_attack_mbps);
      auto base_fields = [&] {
        return std::vector<std::string>{num(lambda), num(period), num(cfg.num_attack_ases),
                                        num(cfg.aggregate_attack_mbps),
                                        num(dpid.victim_mbps.mean), num(closed)};
      };
      if (even.empty()) {
        auto fields = base_fields();
        fields.insert(fields.end(), {"", "", ""});
        csv.row(fields);
      }
      for (const auto& [p, agg] : even) {
        auto fields = base_fields();
        fields.push_back(num(p));
        fields.push_back(num(agg.victim_mbps.mean));
        fields.push_back(num(cfg.aggregate_attack_mbps * agg.expected_reach_fraction.mean));
        csv.row(fields);
      }
    }
  }
}

void cmd_topostats(const ExperimentSpec& spec, std::ostream& out, const CommandOptions& opts) {
  const ScenarioConfig cfg = with_options(spec.base, opts);
  const Topology topology = load_topology(cfg.topology);
  const TopologyStats s = topology_stats(topology, spec.topostats_samples, cfg.master_seed);
  CsvWriter csv(out);
  csv.row({"nodes", "edges", "transient", "core", "pairs", "mode", "mean_path_len",
           "stddev_path_len", "stderr_mean_path_len"});
  csv.row({num(std::uint64_t{s.nodes}), num(std::uint64_t{s.edges}),
           num(std::uint64_t{s.transient}), num(std::uint64_t{s.core}),
           num(std::uint64_t{s.pairs}), s.exact ? "exact" : "sampled", num(s.mean_path_len),
           num(s.stddev_path_len), num(s.stderr_mean_path_len)});
}

}  // namespace logdos
