#include "logdos/analysis.hpp"

#include <cmath>
#include <stdexcept>

#include "logdos/bloom.hpp"

namespace logdos {

std::size_t verifying_count(StrategyKind strategy, std::size_t n) {
  switch (strategy) {
    case StrategyKind::Comprehensive: return n;
    case StrategyKind::Odd: return n / 2;
    case StrategyKind::Even: return (n + 1) / 2;
    case StrategyKind::NoDefense: return 0;
    case StrategyKind::Dynamic:
    case StrategyKind::DPid: break;
  }
  throw std::invalid_argument("no closed-form pass probability for strategy " +
                              std::string(to_string(strategy)));
}

double pr_attack(const PassModel& model) {
  if (!(model.p > 0.0 && model.p < 1.0)) throw std::invalid_argument("p must be in (0, 1)");
  if (model.n < 1) throw std::invalid_argument("path must contain at least one AS");
  return std::pow(model.p, static_cast<double>(verifying_count(model.strategy, model.n)));
}

double expected_reach_fraction(std::span<const std::size_t> path_node_counts,
                               StrategyKind strategy, double p) {
  if (path_node_counts.empty()) throw std::invalid_argument("no attack paths");
  double sum = 0.0;
  for (std::size_t n : path_node_counts) sum += pr_attack({strategy, p, n});
  return sum / static_cast<double>(path_node_counts.size());
}

double expected_reach_fraction(const Topology& t, std::span<const AsId> attackers, AsId victim,
                               StrategyKind strategy, double p) {
  std::vector<std::size_t> lengths;
  lengths.reserve(attackers.size());
  for (AsId a : attackers) lengths.push_back(shortest_path(t, a, victim).size());
  return expected_reach_fraction(lengths, strategy, p);
}

std::vector<StorageRow> storage_curve(std::span<const std::uint64_t> n_values,
                                      std::span<const double> p_values, unsigned k) {
  std::vector<StorageRow> rows;
  rows.reserve(n_values.size() * p_values.size());
  for (std::uint64_t n : n_values) {
    for (double p : p_values) rows.push_back({n, p, k, size_for(n, p, k)});
  }
  return rows;
}

double dpid_valid_share(double events_per_period) {
  if (events_per_period < 0.0) throw std::invalid_argument("negative learning rate");
  const double x = events_per_period;
  if (x < 1e-8) return x / 2.0;  // series limit, avoids 0/0
  return 1.0 + std::expm1(-x) / x;
}

double dpid_closed_form(double lambda_per_min, double t_update_s, double total_attack_mbps) {
  if (!(t_update_s > 0.0)) throw std::invalid_argument("update period must be > 0");
  return total_attack_mbps * dpid_valid_share(lambda_per_min * t_update_s / 60.0);
}

}  // namespace logdos
