#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dmabo/algorithm.hpp"
#include "dmabo/baselines.hpp"
#include "dmabo/kernel.hpp"
#include "dmabo/problem.hpp"

namespace dmabo {

/// Which instance to build and with what parameters. Keys not used by a
/// kind are ignored but still round-trip.
struct ProblemConfig {
  std::string kind = "gp";  // gp | power | oscillation | file
  int agents = 3;
  int constraints = 2;
  std::size_t grid_size = 50;
  KernelSpec kernel{};
  double noise_sigma = 0.02;
  /// Fixes the instance across seeds; otherwise each seed draws its own.
  std::optional<std::uint64_t> instance_seed;
  /// Instance file for kind = file; "{seed}" is replaced by the run seed.
  std::string path;
  double budget = 2.0;
  std::vector<double> p_min;
  std::vector<double> p_max;
  double spacing = 0.05;
  std::vector<double> utility_a;
  std::vector<double> utility_b;
  double xi = 1.0;

  bool operator==(const ProblemConfig&) const = default;
};

struct ExperimentConfig {
  ProblemConfig problem;
  std::string method = "dmabo";  // dmabo | dcei | penalty
  AlgoConfig algo = [] {
    AlgoConfig a;
    a.horizon = 100;
    return a;
  }();
  double penalty_q = 5.0;
  std::vector<std::uint64_t> seeds{0};
  std::string out = "results";

  /// Throws ConfigError.
  void validate() const;

  bool operator==(const ExperimentConfig&) const = default;
};

/// Parses the line-oriented `key = value` format; '#' starts a comment.
/// Errors name the offending line.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);
/// Every key, in a fixed order; parse_config(serialize_config(c)) == c.
std::string serialize_config(const ExperimentConfig& config);

/// "a..b" (inclusive) or a comma-separated list.
std::vector<std::uint64_t> parse_seed_list(std::string_view text);

/// The instance a given seed runs on.
ProblemInstance build_instance(const ProblemConfig& config, std::uint64_t seed);
/// True when every seed shares one instance.
bool instance_is_shared(const ProblemConfig& config);

/// Runs `config.method` on one instance.
RunTrace run_method(const ExperimentConfig& config, const ProblemInstance& problem,
                    std::uint64_t seed);

/// Runs every seed (in parallel, at most DMABO_THREADS workers) and writes
/// into config.out: trace_<method>_seed<k>.csv, summary_<method>.csv, the instance
/// file(s) and config_<method>.txt. Failures are rethrown with the seed prepended;
/// the lowest failing seed wins.
void cmd_run(const ExperimentConfig& config, std::ostream& log, bool quiet);

/// Solves the instance by enumeration and prints the constants report at
/// horizon T. Throws InstanceError when the instance is infeasible.
void cmd_oracle(const ProblemInstance& problem, int horizon, double delta, std::ostream& out);

/// Aggregates every trace_*.csv in `dir` into report_long.csv
/// (method, seed, t, metric, value) and report_grouped.csv
/// (method, t, metric, mean, std, n) written to `out_dir`.
void cmd_report(const std::filesystem::path& dir, const std::filesystem::path& out_dir,
                std::ostream& log, bool quiet);

}  // namespace dmabo
