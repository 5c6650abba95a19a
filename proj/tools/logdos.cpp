// logdos: command-line driver for the LogDos / D-PID simulator.
//
//   logdos run       --config scenario.yaml [--out file.csv] [--seed N] [--threads N]
//   logdos sweep     --config sweep.yaml ...
//   logdos storage   [--config storage.yaml]
//   logdos dpid      --config dpid.yaml ...
//   logdos topostats --config topology.yaml
//
// Exit codes: 0 success, 1 configuration error, 2 I/O error.

#include <fstream>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "logdos/commands.hpp"
#include "logdos/topology.hpp"

namespace {

constexpr int kConfigError = 1;
constexpr int kIoError = 2;

struct Options {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
};

void add_common(CLI::App* cmd, Options& opts, bool config_required) {
  auto* c = cmd->add_option("-c,--config", opts.config, "YAML scenario file");
  if (config_required) c->required();
  cmd->add_option("-o,--out", opts.out, "write CSV here instead of standard output");
  cmd->add_option("--seed", opts.seed, "override master_seed");
  cmd->add_option("--threads", opts.threads, "parallel runs")->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LogDos data-flooding defense simulator"};
  app.require_subcommand(1);
  Options opts;

  auto* run = app.add_subcommand("run", "run the base scenario");
  auto* sweep = app.add_subcommand("sweep", "run every sweep point");
  auto* storage = app.add_subcommand("storage", "bloom filter sizing table");
  auto* dpid = app.add_subcommand("dpid", "D-PID victim rate vs. Even logging");
  auto* topostats = app.add_subcommand("topostats", "topology statistics");
  add_common(run, opts, true);
  add_common(sweep, opts, true);
  add_common(storage, opts, false);
  add_common(dpid, opts, true);
  add_common(topostats, opts, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  try {
    const logdos::ExperimentSpec spec =
        opts.config.empty() ? logdos::ExperimentSpec{} : logdos::parse_config(opts.config);
    const logdos::CommandOptions cmd_opts{opts.seed, opts.threads};

    std::ofstream file;
    if (!opts.out.empty()) {
      file.open(opts.out, std::ios::binary);
      if (!file) {
        std::cerr << "logdos: cannot open " << opts.out << " for writing\n";
        return kIoError;
      }
    }
    std::ostream& out = opts.out.empty() ? std::cout : file;

    if (*run) {
      if (!spec.sweep.empty()) std::cerr << "logdos: run ignores sweep axes; use 'sweep'\n";
      logdos::cmd_run(spec, out, cmd_opts);
    } else if (*sweep) {
      logdos::cmd_sweep(spec, out, cmd_opts);
    } else if (*storage) {
      logdos::cmd_storage(spec, out);
    } else if (*dpid) {
      logdos::cmd_dpid(spec, out, cmd_opts);
    } else if (*topostats) {
      logdos::cmd_topostats(spec, out, cmd_opts);
    }
    out.flush();
    if (!out) {
      std::cerr << "logdos: write failed\n";
      return kIoError;
    }
  } catch (const logdos::ConfigError& e) {
    std::cerr << "logdos: config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "logdos: " << e.what() << '\n';
    return kIoError;
  } catch (const logdos::TopologyError& e) {
    std::cerr << "logdos: topology: " << e.what() << '\n';
    return kIoError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "logdos: config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "logdos: " << e.what() << '\n';
    return kConfigError;
  }
  return 0;
}
