#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "logdos/ids.hpp"
#include "logdos/strategies.hpp"
#include "logdos/topology.hpp"

namespace logdos {

struct PassModel {
  StrategyKind strategy = StrategyKind::Comprehensive;
  double p = 0.01;     ///< per-check false-positive probability
  std::size_t n = 1;   ///< ASes on the path, endpoints included
};

/// Number of ASes on an n-AS path that verify a DATA message:
/// n, floor(n/2), ceil(n/2) for Comprehensive, Odd, Even; 0 without defense.
std::size_t verifying_count(StrategyKind strategy, std::size_t n);

/// Probability that an unlogged DATA message survives every check,
/// p^verifying_count. Throws std::invalid_argument for Dynamic and DPid,
/// which have no path-only closed form.
double pr_attack(const PassModel& model);

/// Mean of pr_attack over attack paths with the given node counts.
double expected_reach_fraction(std::span<const std::size_t> path_node_counts,
                               StrategyKind strategy, double p);

/// Same, computing attacker -> victim shortest paths in `t`. Throws
/// UnreachableError if an attacker cannot reach the victim.
double expected_reach_fraction(const Topology& t, std::span<const AsId> attackers, AsId victim,
                               StrategyKind strategy, double p);

struct StorageRow {
  std::uint64_t n = 0;
  double p = 0.0;
  unsigned k = 0;
  std::uint64_t m_bits = 0;
};

/// size_for over the cross product of n_values and p_values, n-major.
std::vector<StorageRow> storage_curve(std::span<const std::uint64_t> n_values,
                                      std::span<const double> p_values, unsigned k);

/// Expected share of an update period during which a path learned by a
/// Poisson process is still valid: 1 - (1 - e^{-x}) / x with x the expected
/// number of learning events per period.
double dpid_valid_share(double events_per_period);

/// Expected victim rate under D-PID when every attacker re-learns its path
/// at lambda_per_min and PathIds change every t_update_s seconds.
double dpid_closed_form(double lambda_per_min, double t_update_s, double total_attack_mbps);

}  // namespace logdos
