#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "logdos/engine.hpp"

namespace logdos {

/// Invalid configuration. `key_path()` is dotted ("dynamic.threshold");
/// `line()` is 1-based, 0 when unknown.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key_path, std::size_t line, const std::string& message);
  [[nodiscard]] const std::string& key_path() const { return key_path_; }
  [[nodiscard]] std::size_t line() const { return line_; }

 private:
  std::string key_path_;
  std::size_t line_;
};

struct SweepAxes {
  std::vector<StrategyKind> strategy;
  std::vector<double> target_fp;
  std::vector<std::uint64_t> num_attack_ases;
  std::vector<double> aggregate_attack_mbps;
  std::vector<double> lambda_per_min;
  std::vector<double> update_period_s;

  [[nodiscard]] bool empty() const;
};

struct StorageSpec {
  std::vector<std::uint64_t> n_values{500'000, 1'000'000, 1'500'000, 2'000'000};
  std::vector<double> p_values{1e-6, 1e-5, 1e-4, 1e-3, 1e-2, 0.05, 0.1};
  unsigned hash_count = 3;
};

struct ExperimentSpec {
  ScenarioConfig base;
  SweepAxes sweep;
  StorageSpec storage;
  std::size_t topostats_samples = 1000;

  /// Cross product of the sweep axes (axis order: strategy, target_fp,
  /// num_attack_ases, aggregate_attack_mbps, lambda_per_min,
  /// update_period_s), or just `base` when no axis is set.
  [[nodiscard]] std::vector<ScenarioConfig> points() const;
};

/// Parses YAML config text. Unknown keys and invalid values raise
/// ConfigError. Relative topology paths resolve against `base_dir`.
ExperimentSpec parse_config_text(std::string_view text,
                                 const std::filesystem::path& base_dir = {});

/// Reads and parses a config file; std::ios_base::failure if unreadable.
ExperimentSpec parse_config(const std::filesystem::path& path);

}  // namespace logdos
