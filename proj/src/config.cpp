#include "logdos/config.hpp"

#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

namespace logdos {

ConfigError::ConfigError(std::string key_path, std::size_t line, const std::string& message)
    : std::runtime_error(line > 0 ? fmt::format("line {}: {}: {}", line, key_path, message)
                                  : fmt::format("{}: {}", key_path, message)),
      key_path_(std::move(key_path)),
      line_(line) {}

bool SweepAxes::empty() const {
  return strategy.empty() && target_fp.empty() && num_attack_ases.empty() &&
         aggregate_attack_mbps.empty() && lambda_per_min.empty() && update_period_s.empty();
}

std::vector<ScenarioConfig> ExperimentSpec::points() const {
  std::vector<ScenarioConfig> out{base};
  auto expand = [&out](const auto& values, auto apply) {
    if (values.empty()) return;
    std::vector<ScenarioConfig> next;
    next.reserve(out.size() * values.size());
    for (const auto& cfg : out) {
      for (const auto& v : values) {
        ScenarioConfig point = cfg;
        apply(point, v);
        next.push_back(std::move(point));
      }
    }
    out = std::move(next);
  };
  expand(sweep.strategy, [](ScenarioConfig& c, StrategyKind v) { c.strategy = v; });
  expand(sweep.target_fp, [](ScenarioConfig& c, double v) { c.target_fp = v; });
  expand(sweep.num_attack_ases, [](ScenarioConfig& c, std::uint64_t v) { c.num_attack_ases = v; });
  expand(sweep.aggregate_attack_mbps,
         [](ScenarioConfig& c, double v) { c.aggregate_attack_mbps = v; });
  expand(sweep.lambda_per_min, [](ScenarioConfig& c, double v) { c.dpid.lambda_per_min = v; });
  expand(sweep.update_period_s, [](ScenarioConfig& c, double v) { c.dpid.update_period_s = v; });
  if (out.size() > 1) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i].name = fmt::format("{}-{}", base.name, i);
  }
  return out;
}

namespace {

std::size_t line_of(const YAML::Node& node) {
  const auto mark = node.Mark();
  return mark.line >= 0 ? static_cast<std::size_t>(mark.line) + 1 : 0;
}

class Parser {
 public:
  explicit Parser(std::filesystem::path base_dir) : base_dir_(std::move(base_dir)) {}

  ExperimentSpec parse(const YAML::Node& root) {
    ExperimentSpec spec;
    if (!root.IsDefined() || root.IsNull()) return spec;
    require_map(root, "");
    for (const auto& kv : root) {
      const std::string key = kv.first.as<std::string>();
      const YAML::Node& v = kv.second;
      lines_[key] = line_of(kv.first);
      ScenarioConfig& c = spec.base;
      if (key == "name") c.name = get<std::string>(v, key);
      else if (key == "strategy") c.strategy = strategy(v, key);
      else if (key == "target_fp") c.target_fp = get<double>(v, key);
      else if (key == "hash_count") c.hash_count = get<unsigned>(v, key);
      else if (key == "filter_capacity") c.filter_capacity = get<std::uint64_t>(v, key);
      else if (key == "num_attack_ases") c.num_attack_ases = get<std::uint64_t>(v, key);
      else if (key == "aggregate_attack_mbps") c.aggregate_attack_mbps = get<double>(v, key);
      else if (key == "packets_per_attacker") c.packets_per_attacker = get<std::uint64_t>(v, key);
      else if (key == "horizon_ticks") c.horizon_ticks = get<Tick>(v, key);
      else if (key == "tick_ms") c.tick_ms = get<std::uint32_t>(v, key);
      else if (key == "per_hop_ticks") c.per_hop_ticks = get<Tick>(v, key);
      else if (key == "runs") c.runs = get<std::uint64_t>(v, key);
      else if (key == "master_seed") c.master_seed = get<std::uint64_t>(v, key);
      else if (key == "transient_only") c.transient_only = get<bool>(v, key);
      else if (key == "attack_sid") c.attack_sid = attack_sid(v, key);
      else if (key == "topology") topology(v, c.topology);
      else if (key == "dynamic") dynamic(v, c);
      else if (key == "dpid") dpid(v, c.dpid);
      else if (key == "background") background(v, c.background);
      else if (key == "sweep") sweep(v, spec.sweep);
      else if (key == "storage") storage(v, spec.storage);
      else if (key == "topostats") topostats(v, spec);
      else throw ConfigError(key, line_of(kv.first), "unknown key");
    }
    validate(spec);
    return spec;
  }

 private:
  template <typename T>
  T get(const YAML::Node& node, const std::string& path) {
    if (!node.IsScalar()) throw ConfigError(path, line_of(node), "expected a scalar value");
    try {
      return node.as<T>();
    } catch (const YAML::Exception&) {
      throw ConfigError(path, line_of(node),
                        fmt::format("cannot interpret '{}'", node.Scalar()));
    }
  }

  template <typename T>
  std::vector<T> list(const YAML::Node& node, const std::string& path) {
    if (!node.IsSequence()) throw ConfigError(path, line_of(node), "expected a list");
    std::vector<T> out;
    for (const auto& item : node) out.push_back(get<T>(item, path));
    return out;
  }

  void require_map(const YAML::Node& node, const std::string& path) {
    if (!node.IsMap())
      throw ConfigError(path.empty() ? "<root>" : path, line_of(node), "expected a mapping");
  }

  StrategyKind strategy(const YAML::Node& node, const std::string& path) {
    const auto name = get<std::string>(node, path);
    auto kind = parse_strategy(name);
    if (!kind)
      throw ConfigError(path, line_of(node),
                        fmt::format("unknown strategy '{}' (none, comprehensive, odd, even, "
                                    "dynamic, dpid)", name));
    return *kind;
  }

  AttackSid attack_sid(const YAML::Node& node, const std::string& path) {
    const auto name = get<std::string>(node, path);
    if (name == "random") return AttackSid::Random;
    if (name == "copied") return AttackSid::Copied;
    throw ConfigError(path, line_of(node), "expected 'random' or 'copied'");
  }

  std::string resolve(const std::string& p) const {
    std::filesystem::path path(p);
    if (path.is_relative() && !base_dir_.empty()) path = base_dir_ / path;
    return path.string();
  }

  template <typename F>
  void each(const YAML::Node& node, const std::string& section, F&& f) {
    require_map(node, section);
    for (const auto& kv : node) {
      const std::string key = kv.first.as<std::string>();
      const std::string path = section + "." + key;
      lines_[path] = line_of(kv.first);
      if (!f(key, kv.second, path)) throw ConfigError(path, line_of(kv.first), "unknown key");
    }
  }

  void topology(const YAML::Node& node, TopologySource& t) {
    each(node, "topology", [&](const std::string& key, const YAML::Node& v, const std::string& p) {
      if (key == "source") {
        const auto s = get<std::string>(v, p);
        if (s == "synthetic") t.kind = TopologySource::Kind::Synthetic;
        else if (s == "file") t.kind = TopologySource::Kind::File;
        else throw ConfigError(p, line_of(v), "expected 'synthetic' or 'file'");
      } else if (key == "path") {
        t.path = resolve(get<std::string>(v, p));
        t.kind = TopologySource::Kind::File;
      } else if (key == "metadata") {
        t.metadata_path = resolve(get<std::string>(v, p));
      } else if (key == "nodes") {
        t.nodes = get<std::size_t>(v, p);
      } else if (key == "attachment") {
        t.attachment = get<std::size_t>(v, p);
      } else if (key == "seed") {
        t.seed = get<std::uint64_t>(v, p);
      } else {
        return false;
      }
      return true;
    });
  }

  void dynamic(const YAML::Node& node, ScenarioConfig& c) {
    each(node, "dynamic", [&](const std::string& key, const YAML::Node& v, const std::string& p) {
      if (key == "initial_duration_ticks") c.dynamic.initial_duration = get<Tick>(v, p);
      else if (key == "silent_period_ticks") c.dynamic.silent_period = get<Tick>(v, p);
      else if (key == "validation_shift_ticks") c.dynamic.validation_shift = get<Tick>(v, p);
      else if (key == "threshold") c.dynamic.threshold = get<std::uint64_t>(v, p);
      else if (key == "refill_on_reset") c.dynamic_refill = get<bool>(v, p);
      else return false;
      return true;
    });
  }

  void dpid(const YAML::Node& node, DpidParams& d) {
    each(node, "dpid", [&](const std::string& key, const YAML::Node& v, const std::string& p) {
      if (key == "update_period_s") d.update_period_s = get<double>(v, p);
      else if (key == "lambda_per_min") d.lambda_per_min = get<double>(v, p);
      else if (key == "horizon_s") d.horizon_s = get<double>(v, p);
      else if (key == "even_fp") d.even_fp = list<double>(v, p);
      else return false;
      return true;
    });
  }

  void background(const YAML::Node& node, BackgroundParams& b) {
    each(node, "background", [&](const std::string& key, const YAML::Node& v, const std::string& p) {
      if (key == "prefill_fraction") b.prefill_fraction = get<double>(v, p);
      else if (key == "live_get_rate") b.live_get_rate = get<double>(v, p);
      else if (key == "catalog_size") b.catalog_size = get<std::size_t>(v, p);
      else return false;
      return true;
    });
  }

  void sweep(const YAML::Node& node, SweepAxes& s) {
    each(node, "sweep", [&](const std::string& key, const YAML::Node& v, const std::string& p) {
      if (key == "strategy") {
        if (!v.IsSequence()) throw ConfigError(p, line_of(v), "expected a list");
        for (const auto& item : v) s.strategy.push_back(strategy(item, p));
      } else if (key == "target_fp") {
        s.target_fp = list<double>(v, p);
      } else if (key == "num_attack_ases") {
        s.num_attack_ases = list<std::uint64_t>(v, p);
      } else if (key == "aggregate_attack_mbps") {
        s.aggregate_attack_mbps = list<double>(v, p);
      } else if (key == "lambda_per_min") {
        s.lambda_per_min = list<double>(v, p);
      } else if (key == "update_period_s") {
        s.update_period_s = list<double>(v, p);
      } else {
        return false;
      }
      return true;
    });
  }

  void storage(const YAML::Node& node, StorageSpec& s) {
    each(node, "storage", [&](const std::string& key, const YAML::Node& v, const std::string& p) {
      if (key == "n_values") s.n_values = list<std::uint64_t>(v, p);
      else if (key == "p_values") s.p_values = list<double>(v, p);
      else if (key == "hash_count") s.hash_count = get<unsigned>(v, p);
      else return false;
      return true;
    });
  }

  void topostats(const YAML::Node& node, ExperimentSpec& spec) {
    each(node, "topostats", [&](const std::string& key, const YAML::Node& v, const std::string& p) {
      if (key == "sample_pairs") spec.topostats_samples = get<std::size_t>(v, p);
      else return false;
      return true;
    });
  }

  std::size_t line_for(const std::string& path) const {
    auto it = lines_.find(path);
    return it == lines_.end() ? 0 : it->second;
  }

  // ScenarioConfig::validate reports "field: reason".
  [[noreturn]] void rethrow(const std::invalid_argument& e, const std::string& prefix) {
    const std::string what = e.what();
    const auto colon = what.find(": ");
    std::string field = colon == std::string::npos ? std::string("<config>") : what.substr(0, colon);
    const std::string reason = colon == std::string::npos ? what : what.substr(colon + 2);
    if (!prefix.empty() && lines_.count(prefix + "." + field) != 0) field = prefix + "." + field;
    throw ConfigError(field, line_for(field), reason);
  }

  void validate(const ExperimentSpec& spec) {
    try {
      spec.base.validate();
    } catch (const std::invalid_argument& e) {
      rethrow(e, "");
    }
    for (const auto& point : spec.points()) {
      try {
        point.validate();
      } catch (const std::invalid_argument& e) {
        rethrow(e, "sweep");
      }
    }
    for (double p : spec.storage.p_values)
      if (!(p > 0.0 && p < 1.0))
        throw ConfigError("storage.p_values", line_for("storage.p_values"), "entries must be in (0, 1)");
    for (auto n : spec.storage.n_values)
      if (n < 1)
        throw ConfigError("storage.n_values", line_for("storage.n_values"), "entries must be >= 1");
    if (spec.storage.hash_count < 1)
      throw ConfigError("storage.hash_count", line_for("storage.hash_count"), "must be >= 1");
  }

  std::filesystem::path base_dir_;
  std::map<std::string, std::size_t> lines_;
};

}  // namespace

ExperimentSpec parse_config_text(std::string_view text, const std::filesystem::path& base_dir) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::ParserException& e) {
    throw ConfigError("<yaml>", static_cast<std::size_t>(e.mark.line + 1), e.msg);
  }
  return Parser(base_dir).parse(root);
}

ExperimentSpec parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot open config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path.parent_path());
}

}  // namespace logdos
