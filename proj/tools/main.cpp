// dmabo: run experiments, print the constants report, aggregate traces.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "dmabo/error.hpp"
#include "dmabo/experiment.hpp"
#include "dmabo/instance_io.hpp"
#include "dmabo/problems.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitInfeasible = 4;

struct Options {
  std::string config;
  std::string out;
  std::string seeds;
  std::string method;
  std::optional<int> horizon;
  bool quiet = false;
  std::string instance;
  std::string trace_dir;
  double delta = 0.1;
};

dmabo::ExperimentConfig load_with_overrides(const Options& opt) {
  dmabo::ExperimentConfig config = dmabo::load_config(opt.config);
  try {
    if (!opt.out.empty()) config.out = opt.out;
    if (!opt.seeds.empty()) config.seeds = dmabo::parse_seed_list(opt.seeds);
    if (!opt.method.empty()) config.method = opt.method;
    if (opt.horizon) config.algo.horizon = *opt.horizon;
  } catch (const dmabo::InputError& e) {
    throw dmabo::ConfigError(e.what());
  }
  config.validate();
  return config;
}

int run(const Options& opt) {
  const dmabo::ExperimentConfig config = load_with_overrides(opt);
  dmabo::cmd_run(config, std::cerr, opt.quiet);
  if (!opt.quiet) std::cerr << "wrote " << config.out << "\n";
  return 0;
}

int oracle(const Options& opt) {
  dmabo::ProblemInstance problem;
  int horizon = opt.horizon.value_or(100);
  if (!opt.instance.empty()) {
    problem = dmabo::load_instance(opt.instance);
  } else if (!opt.config.empty()) {
    const dmabo::ExperimentConfig config = load_with_overrides(opt);
    problem = dmabo::build_instance(config.problem, config.seeds.front());
    if (!opt.horizon) horizon = config.algo.horizon;
  } else {
    throw dmabo::ConfigError("oracle needs an instance file or --config");
  }
  dmabo::cmd_oracle(problem, horizon, opt.delta, std::cout);
  return 0;
}

int report(const Options& opt) {
  const std::string out = opt.out.empty() ? opt.trace_dir : opt.out;
  dmabo::cmd_report(opt.trace_dir, out, std::cerr, opt.quiet);
  if (!opt.quiet) std::cerr << "wrote " << out << "/report_long.csv and report_grouped.csv\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distributed multi-agent Bayesian optimization with coupled constraints"};
  app.require_subcommand(1);
  Options opt;

  auto* run_cmd = app.add_subcommand("run", "run an experiment config over a seed range");
  run_cmd->add_option("--config", opt.config, "experiment config file")->required();
  run_cmd->add_option("--out", opt.out, "output directory (overrides the config)");
  run_cmd->add_option("--seeds", opt.seeds, "seed range a..b or list a,b,c");
  run_cmd->add_option("--method", opt.method, "dmabo | dcei | penalty");
  run_cmd->add_option("--T", opt.horizon, "horizon");
  run_cmd->add_flag("--quiet", opt.quiet, "no progress output");

  auto* oracle_cmd = app.add_subcommand("oracle", "solve an instance and print the constants report");
  oracle_cmd->add_option("instance", opt.instance, "instance JSON file");
  oracle_cmd->add_option("--config", opt.config, "build the instance from a config instead");
  oracle_cmd->add_option("--seeds", opt.seeds, "seed used to build the instance (first one)");
  oracle_cmd->add_option("--T", opt.horizon, "horizon for the schedule constants");
  oracle_cmd->add_option("--delta", opt.delta, "confidence level");

  auto* report_cmd = app.add_subcommand("report", "aggregate trace CSVs into plot-ready tables");
  report_cmd->add_option("dir", opt.trace_dir, "directory holding trace_*.csv")->required();
  report_cmd->add_option("--out", opt.out, "output directory (default: the trace directory)");
  report_cmd->add_flag("--quiet", opt.quiet, "no progress output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*run_cmd) return run(opt);
    if (*oracle_cmd) return oracle(opt);
    if (*report_cmd) return report(opt);
  } catch (const dmabo::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const dmabo::InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const dmabo::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const dmabo::InstanceError& e) {
    std::cerr << "infeasible instance: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
