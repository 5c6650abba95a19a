#pragma once

#include <cstdint>
#include <optional>
#include <ostream>

#include "logdos/config.hpp"

namespace logdos {

struct CommandOptions {
  std::optional<std::uint64_t> seed;  ///< overrides master_seed
  unsigned threads = 1;
};

/// Header of the per-run CSV emitted by cmd_run and cmd_sweep.
inline constexpr std::string_view kRunCsvHeader =
    "scenario,strategy,p,k,attack_ases,aggregate_mbps,run,seed,sent,reached,"
    "filtered_fraction,victim_mbps,legit_sent,legit_dropped,storage_bits_per_as";

/// Runs the base scenario only (sweep axes are ignored).
void cmd_run(const ExperimentSpec& spec, std::ostream& out, const CommandOptions& opts = {});
/// Runs every sweep point; one row per run plus a run=mean row per point.
void cmd_sweep(const ExperimentSpec& spec, std::ostream& out, const CommandOptions& opts = {});
/// Bloom sizing table over storage.n_values x storage.p_values.
void cmd_storage(const ExperimentSpec& spec, std::ostream& out);
/// D-PID victim rates per (lambda, update period) with Even-logging rows
/// for each dpid.even_fp.
void cmd_dpid(const ExperimentSpec& spec, std::ostream& out, const CommandOptions& opts = {});
/// Node/edge counts and path-length statistics of the configured topology.
void cmd_topostats(const ExperimentSpec& spec, std::ostream& out, const CommandOptions& opts = {});

}  // namespace logdos
