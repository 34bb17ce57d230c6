#include "dmabo/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include "dmabo/constants.hpp"
#include "dmabo/error.hpp"
#include "dmabo/instance_io.hpp"
#include "dmabo/metrics.hpp"
#include "dmabo/problems.hpp"
#include "dmabo/trace_csv.hpp"

namespace dmabo {
namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

double parse_double(const std::string& value) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(value, &used);
  } catch (const std::exception&) {
    throw InputError("expected a number, got '" + value + "'");
  }
  if (used != value.size()) throw InputError("expected a number, got '" + value + "'");
  return v;
}

template <typename Int>
Int parse_int(const std::string& value) {
  Int v{};
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw InputError("expected an integer, got '" + value + "'");
  }
  return v;
}

std::vector<double> parse_list(const std::string& value) {
  std::vector<double> out;
  if (value.empty()) return out;
  for (const auto& part : split(value, ',')) out.push_back(parse_double(part));
  return out;
}

std::string join(const std::vector<double>& values) {
  std::string out;
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (k > 0) out += ',';
    out += format_double(values[k]);
  }
  return out;
}

std::string seeds_to_string(const std::vector<std::uint64_t>& seeds) {
  bool contiguous = seeds.size() > 1;
  for (std::size_t k = 1; k < seeds.size() && contiguous; ++k) {
    contiguous = seeds[k] == seeds[k - 1] + 1;
  }
  if (contiguous) return std::to_string(seeds.front()) + ".." + std::to_string(seeds.back());
  std::string out;
  for (std::size_t k = 0; k < seeds.size(); ++k) {
    if (k > 0) out += ',';
    out += std::to_string(seeds[k]);
  }
  return out;
}

using Setter = std::function<void(ExperimentConfig&, const std::string&)>;

const std::vector<std::pair<std::string, Setter>>& setters() {
  static const std::vector<std::pair<std::string, Setter>> table = {
      {"problem", [](auto& c, const auto& v) { c.problem.kind = v; }},
      {"problem.agents", [](auto& c, const auto& v) { c.problem.agents = parse_int<int>(v); }},
      {"problem.constraints",
       [](auto& c, const auto& v) { c.problem.constraints = parse_int<int>(v); }},
      {"problem.grid_size",
       [](auto& c, const auto& v) { c.problem.grid_size = parse_int<std::size_t>(v); }},
      {"problem.kernel",
       [](auto& c, const auto& v) { c.problem.kernel.family = kernel_family_from_string(v); }},
      {"problem.lengthscale",
       [](auto& c, const auto& v) { c.problem.kernel.lengthscales = parse_list(v); }},
      {"problem.output_scale",
       [](auto& c, const auto& v) { c.problem.kernel.output_scale = parse_double(v); }},
      {"problem.noise_sigma",
       [](auto& c, const auto& v) { c.problem.noise_sigma = parse_double(v); }},
      {"problem.instance_seed",
       [](auto& c, const auto& v) {
         if (v.empty() || v == "none") {
           c.problem.instance_seed.reset();
         } else {
           c.problem.instance_seed = parse_int<std::uint64_t>(v);
         }
       }},
      {"problem.path", [](auto& c, const auto& v) { c.problem.path = v; }},
      {"problem.budget", [](auto& c, const auto& v) { c.problem.budget = parse_double(v); }},
      {"problem.p_min", [](auto& c, const auto& v) { c.problem.p_min = parse_list(v); }},
      {"problem.p_max", [](auto& c, const auto& v) { c.problem.p_max = parse_list(v); }},
      {"problem.spacing", [](auto& c, const auto& v) { c.problem.spacing = parse_double(v); }},
      {"problem.utility_a", [](auto& c, const auto& v) { c.problem.utility_a = parse_list(v); }},
      {"problem.utility_b", [](auto& c, const auto& v) { c.problem.utility_b = parse_list(v); }},
      {"problem.xi", [](auto& c, const auto& v) { c.problem.xi = parse_double(v); }},
      {"method", [](auto& c, const auto& v) { c.method = v; }},
      {"T", [](auto& c, const auto& v) { c.algo.horizon = parse_int<int>(v); }},
      {"beta",
       [](auto& c, const auto& v) {
         c.algo.beta = v == "theoretical" ? BetaMode::theoretical()
                                          : BetaMode::constant(parse_double(v));
       }},
      {"delta", [](auto& c, const auto& v) { c.algo.delta = parse_double(v); }},
      {"model_noise", [](auto& c, const auto& v) { c.algo.model_noise = parse_double(v); }},
      {"eta",
       [](auto& c, const auto& v) {
         if (v == "auto") {
           c.algo.eta.reset();
         } else {
           c.algo.eta = parse_double(v);
         }
       }},
      {"epsilon",
       [](auto& c, const auto& v) {
         if (v == "eps1") {
           c.algo.epsilon = EpsilonMode::epsilon1();
         } else if (v == "eps2") {
           c.algo.epsilon = EpsilonMode::epsilon2();
         } else {
           c.algo.epsilon = EpsilonMode::manual(parse_double(v));
         }
       }},
      {"lambda1",
       [](auto& c, const auto& v) {
         c.algo.lambda1 = v == "theoretical" ? Lambda1Mode::theoretical()
                                             : Lambda1Mode::manual(parse_double(v));
       }},
      {"lambda1_divisor",
       [](auto& c, const auto& v) { c.algo.lambda1_divisor = parse_double(v); }},
      {"mu1", [](auto& c, const auto& v) { c.algo.mu1 = parse_double(v); }},
      {"bounds",
       [](auto& c, const auto& v) {
         if (v == "gp") {
           c.algo.bounds = BoundsSource::kGaussianProcess;
         } else if (v == "exact") {
           c.algo.bounds = BoundsSource::kExact;
         } else {
           throw InputError("bounds must be gp or exact");
         }
       }},
      {"penalty_q", [](auto& c, const auto& v) { c.penalty_q = parse_double(v); }},
      {"seeds", [](auto& c, const auto& v) { c.seeds = parse_seed_list(v); }},
      {"out", [](auto& c, const auto& v) { c.out = v; }},
  };
  return table;
}

BaselineConfig baseline_config(const ExperimentConfig& config) {
  BaselineConfig b;
  b.horizon = config.algo.horizon;
  b.model_noise = config.algo.model_noise;
  if (config.algo.beta.kind == BetaMode::Kind::kConstant) b.beta = config.algo.beta.value;
  b.penalty_q = config.penalty_q;
  return b;
}

std::string replace_seed(std::string pattern, std::uint64_t seed) {
  const std::string token = "{seed}";
  for (auto pos = pattern.find(token); pos != std::string::npos; pos = pattern.find(token)) {
    pattern.replace(pos, token.size(), std::to_string(seed));
  }
  return pattern;
}

std::size_t worker_count(std::size_t jobs) {
  std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("DMABO_THREADS")) {
    try {
      const long cap = std::stol(env);
      if (cap >= 1) workers = std::min(workers, static_cast<std::size_t>(cap));
    } catch (const std::exception&) {
      // unparsable values leave the default in place
    }
  }
  return std::max<std::size_t>(1, std::min(workers, jobs));
}

struct SeedSummary {
  std::uint64_t seed = 0;
  std::size_t horizon = 0;
  double regret = 0.0;
  double violation = 0.0;
  double strong_violation = 0.0;
  double shift = 0.0;
  std::optional<double> best_gap;
  double avg_utility = 0.0;
  double frac_x_eq_1 = 0.0;
};

SeedSummary summarize(const RunTrace& trace, const ProblemInstance& problem, double f_star) {
  SeedSummary s;
  s.seed = trace.seed;
  s.horizon = trace.horizon();
  if (!trace.rounds.empty()) {
    s.regret = regret_trace(trace, f_star).back();
    s.violation = violation_trace(trace).back();
    s.strong_violation = strong_violation_trace(trace).back();
    s.shift = shift_trace(trace, problem).back();
    s.avg_utility = average_utility_trace(trace).back();
  }
  if (const auto best = best_iterate(trace)) s.best_gap = best->total_f - f_star;
  if (problem.kind == "oscillation") {
    s.frac_x_eq_1 = selection_fraction(trace, 0, problem.agents[0].size() - 1);
  }
  return s;
}

std::pair<double, double> mean_std(const std::vector<double>& values) {
  if (values.empty()) return {0.0, 0.0};
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  const double n = static_cast<double>(values.size());
  return {mean, values.size() > 1 ? std::sqrt(var / (n - 1.0)) : 0.0};
}

void write_summary(const std::filesystem::path& path, const std::string& method,
                   const std::vector<SeedSummary>& rows, bool oscillation) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out << "method,seed,T,R_T,V_T,Vplus_T,S_T,best_gap,avg_utility_T";
  if (oscillation) out << ",frac_x_eq_1";
  out << '\n';
  std::vector<std::vector<double>> columns(7);
  for (const auto& r : rows) {
    out << method << ',' << r.seed << ',' << r.horizon << ',' << format_double(r.regret) << ','
        << format_double(r.violation) << ',' << format_double(r.strong_violation) << ','
        << format_double(r.shift) << ',' << (r.best_gap ? format_double(*r.best_gap) : "") << ','
        << format_double(r.avg_utility);
    if (oscillation) out << ',' << format_double(r.frac_x_eq_1);
    out << '\n';
    columns[0].push_back(r.regret);
    columns[1].push_back(r.violation);
    columns[2].push_back(r.strong_violation);
    columns[3].push_back(r.shift);
    if (r.best_gap) columns[4].push_back(*r.best_gap);
    columns[5].push_back(r.avg_utility);
    columns[6].push_back(r.frac_x_eq_1);
  }
  for (int which = 0; which < 2; ++which) {
    auto pick = [&](const std::vector<double>& v) {
      const auto [mean, sd] = mean_std(v);
      return format_double(which == 0 ? mean : sd);
    };
    out << method << ',' << (which == 0 ? "mean" : "std") << ','
        << (rows.empty() ? 0 : rows.front().horizon) << ',' << pick(columns[0]) << ','
        << pick(columns[1]) << ',' << pick(columns[2]) << ',' << pick(columns[3]) << ','
        << (columns[4].empty() ? "" : pick(columns[4])) << ',' << pick(columns[5]);
    if (oscillation) out << ',' << pick(columns[6]);
    out << '\n';
  }
}

}  // namespace

std::vector<std::uint64_t> parse_seed_list(std::string_view text) {
  const std::string s = trim(text);
  if (s.empty()) throw InputError("empty seed list");
  std::vector<std::uint64_t> seeds;
  if (const auto dots = s.find(".."); dots != std::string::npos) {
    const auto lo = parse_int<std::uint64_t>(trim(s.substr(0, dots)));
    const auto hi = parse_int<std::uint64_t>(trim(s.substr(dots + 2)));
    if (hi < lo) throw InputError("seed range a..b needs a <= b");
    for (auto k = lo; k <= hi; ++k) seeds.push_back(k);
    return seeds;
  }
  for (const auto& part : split(s, ',')) seeds.push_back(parse_int<std::uint64_t>(part));
  return seeds;
}

void ExperimentConfig::validate() const {
  static const std::set<std::string> kinds = {"gp", "power", "oscillation", "file"};
  static const std::set<std::string> methods = {"dmabo", "dcei", "penalty"};
  if (!kinds.contains(problem.kind)) throw ConfigError("unknown problem kind '" + problem.kind + "'");
  if (!methods.contains(method)) throw ConfigError("unknown method '" + method + "'");
  if (seeds.empty()) throw ConfigError("seed list must not be empty");
  if (out.empty()) throw ConfigError("output directory must not be empty");
  if (problem.agents < 1) throw ConfigError("problem.agents must be at least 1");
  if (problem.constraints < 0) throw ConfigError("problem.constraints must be nonnegative");
  if (problem.grid_size < 1) throw ConfigError("problem.grid_size must be positive");
  if (!(problem.noise_sigma >= 0.0)) throw ConfigError("problem.noise_sigma must be nonnegative");
  if (problem.kind == "file" && problem.path.empty()) throw ConfigError("problem.path is required");
  if (!(penalty_q >= 0.0)) throw ConfigError("penalty_q must be nonnegative");
  if (method != "dmabo" && algo.epsilon.kind != EpsilonMode::Kind::kManual) {
    throw ConfigError("epsilon schedules only apply to method dmabo");
  }
  try {
    problem.kernel.validate();
    algo.validate();
  } catch (const InputError& e) {
    throw ConfigError(e.what());
  }
}

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig config;
  std::set<std::string> seen;
  std::istringstream in{std::string(text)};
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("expected 'key = value'", number);
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    const auto& table = setters();
    const auto it = std::find_if(table.begin(), table.end(),
                                 [&](const auto& entry) { return entry.first == key; });
    if (it == table.end()) throw ConfigError("unknown key '" + key + "'", number);
    if (!seen.insert(key).second) throw ConfigError("duplicate key '" + key + "'", number);
    try {
      it->second(config, value);
    } catch (const InputError& e) {
      throw ConfigError(key + ": " + e.what(), number);
    }
  }
  config.validate();
  return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string serialize_config(const ExperimentConfig& c) {
  std::ostringstream out;
  const ProblemConfig& p = c.problem;
  const AlgoConfig& a = c.algo;
  out << "problem = " << p.kind << '\n'
      << "problem.agents = " << p.agents << '\n'
      << "problem.constraints = " << p.constraints << '\n'
      << "problem.grid_size = " << p.grid_size << '\n'
      << "problem.kernel = " << to_string(p.kernel.family) << '\n'
      << "problem.lengthscale = " << join(p.kernel.lengthscales) << '\n'
      << "problem.output_scale = " << format_double(p.kernel.output_scale) << '\n'
      << "problem.noise_sigma = " << format_double(p.noise_sigma) << '\n'
      << "problem.instance_seed = "
      << (p.instance_seed ? std::to_string(*p.instance_seed) : std::string("none")) << '\n'
      << "problem.path = " << p.path << '\n'
      << "problem.budget = " << format_double(p.budget) << '\n'
      << "problem.p_min = " << join(p.p_min) << '\n'
      << "problem.p_max = " << join(p.p_max) << '\n'
      << "problem.spacing = " << format_double(p.spacing) << '\n'
      << "problem.utility_a = " << join(p.utility_a) << '\n'
      << "problem.utility_b = " << join(p.utility_b) << '\n'
      << "problem.xi = " << format_double(p.xi) << '\n'
      << "method = " << c.method << '\n'
      << "T = " << a.horizon << '\n'
      << "beta = "
      << (a.beta.kind == BetaMode::Kind::kTheoretical ? std::string("theoretical")
                                                      : format_double(a.beta.value))
      << '\n'
      << "delta = " << format_double(a.delta) << '\n'
      << "model_noise = " << format_double(a.model_noise) << '\n'
      << "eta = " << (a.eta ? format_double(*a.eta) : std::string("auto")) << '\n'
      << "epsilon = ";
  switch (a.epsilon.kind) {
    case EpsilonMode::Kind::kEpsilon1:
      out << "eps1";
      break;
    case EpsilonMode::Kind::kEpsilon2:
      out << "eps2";
      break;
    case EpsilonMode::Kind::kManual:
      out << format_double(a.epsilon.value);
      break;
  }
  out << '\n'
      << "lambda1 = "
      << (a.lambda1.kind == Lambda1Mode::Kind::kTheoretical ? std::string("theoretical")
                                                            : format_double(a.lambda1.value))
      << '\n'
      << "lambda1_divisor = " << format_double(a.lambda1_divisor) << '\n'
      << "mu1 = " << format_double(a.mu1) << '\n'
      << "bounds = " << (a.bounds == BoundsSource::kExact ? "exact" : "gp") << '\n'
      << "penalty_q = " << format_double(c.penalty_q) << '\n'
      << "seeds = " << seeds_to_string(c.seeds) << '\n'
      << "out = " << c.out << '\n';
  return out.str();
}

bool instance_is_shared(const ProblemConfig& config) {
  if (config.kind == "oscillation") return true;
  if (config.kind == "file") return config.path.find("{seed}") == std::string::npos;
  return config.instance_seed.has_value();
}

ProblemInstance build_instance(const ProblemConfig& config, std::uint64_t seed) {
  const std::uint64_t instance_seed = config.instance_seed.value_or(seed);
  if (config.kind == "gp") {
    return make_gp_instance(config.agents, config.constraints, config.kernel, config.grid_size,
                            instance_seed, config.noise_sigma);
  }
  if (config.kind == "power") {
    PowerAllocationSpec spec;
    spec.num_agents = config.agents;
    spec.budget = config.budget;
    spec.p_min = config.p_min;
    spec.p_max = config.p_max;
    spec.spacing = config.spacing;
    spec.utility_seed = instance_seed;
    spec.a = config.utility_a;
    spec.b = config.utility_b;
    spec.noise_sigma = config.noise_sigma;
    spec.xi = config.xi;
    spec.kernel = config.kernel;
    return make_power_allocation(spec);
  }
  if (config.kind == "oscillation") return make_oscillation_example();
  if (config.kind == "file") {
    ProblemInstance problem = load_instance(replace_seed(config.path, seed));
    if (!problem.reference) problem.reference = solve_reference(problem);
    return problem;
  }
  throw ConfigError("unknown problem kind '" + config.kind + "'");
}

RunTrace run_method(const ExperimentConfig& config, const ProblemInstance& problem,
                    std::uint64_t seed) {
  if (config.method == "dmabo") return run_dmabo(problem, config.algo, seed);
  if (config.method == "dcei") return run_dcei(problem, baseline_config(config), seed);
  if (config.method == "penalty") return run_penalty(problem, baseline_config(config), seed);
  throw ConfigError("unknown method '" + config.method + "'");
}

void cmd_run(const ExperimentConfig& config, std::ostream& log, bool quiet) {
  config.validate();
  const std::filesystem::path out_dir(config.out);
  std::filesystem::create_directories(out_dir);
  {
    std::ofstream cfg(out_dir / ("config_" + config.method + ".txt"), std::ios::binary);
    cfg << serialize_config(config);
  }

  std::optional<ProblemInstance> shared;
  if (instance_is_shared(config.problem)) {
    shared = build_instance(config.problem, config.seeds.front());
    save_instance(out_dir / "instance.json", *shared);
  }

  const std::size_t jobs = config.seeds.size();
  std::vector<SeedSummary> summaries(jobs);
  std::vector<std::exception_ptr> failures(jobs);
  std::atomic<std::size_t> next{0};
  std::mutex log_mutex;

  auto work = [&] {
    for (std::size_t k = next++; k < jobs; k = next++) {
      const std::uint64_t seed = config.seeds[k];
      try {
        const auto start = std::chrono::steady_clock::now();
        ProblemInstance local;
        if (!shared) {
          local = build_instance(config.problem, seed);
          save_instance(out_dir / ("instance_seed" + std::to_string(seed) + ".json"), local);
        }
        const ProblemInstance& problem = shared ? *shared : local;
        const RunTrace trace = run_method(config, problem, seed);
        const double f_star = problem.reference->f_star;
        write_trace_csv(out_dir / ("trace_" + config.method + "_seed" + std::to_string(seed) + ".csv"),
                        trace, problem, f_star);
        summaries[k] = summarize(trace, problem, f_star);
        if (!quiet) {
          const double secs =
              std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
          const std::lock_guard lock(log_mutex);
          log << config.method << " seed " << seed << ": R_T=" << summaries[k].regret
              << " V_T=" << summaries[k].violation << " S_T=" << summaries[k].shift << " ("
              << secs << " s)\n";
        }
      } catch (...) {
        failures[k] = std::current_exception();
      }
    }
  };

  const std::size_t workers = worker_count(jobs);
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& thread : pool) thread.join();

  for (std::size_t k = 0; k < jobs; ++k) {
    if (!failures[k]) continue;
    const std::string prefix = "seed " + std::to_string(config.seeds[k]) + ": ";
    try {
      std::rethrow_exception(failures[k]);
    } catch (const NumericalError& e) {
      throw NumericalError(prefix + e.what());
    } catch (const InstanceError& e) {
      throw InstanceError(prefix + e.what());
    } catch (const ConfigError& e) {
      throw ConfigError(prefix + e.what());
    } catch (const InputError& e) {
      throw InputError(prefix + e.what());
    }
  }
  write_summary(out_dir / ("summary_" + config.method + ".csv"), config.method, summaries,
                config.problem.kind == "oscillation");
}

void cmd_oracle(const ProblemInstance& problem, int horizon, double delta, std::ostream& out) {
  const ReferenceSolution ref = solve_reference(problem);
  out << "kind: " << problem.kind << '\n';
  for (std::size_t i = 0; i < ref.indices.size(); ++i) {
    const Point& x = problem.agents[i].grid[ref.indices[i]];
    out << "x*[" << i << "] =";
    for (Eigen::Index d = 0; d < x.size(); ++d) out << ' ' << format_double(x[d]);
    out << '\n';
  }
  out << "f* = " << format_double(ref.f_star) << '\n';
  if (ref.xi) {
    out << "xi (certified) = " << format_double(*ref.xi) << '\n';
  } else {
    out << "xi (configured, no black-box constraints) = " << format_double(problem.xi) << '\n';
  }

  ScheduleOptions options;
  options.horizon = std::max(horizon, 1);
  options.delta = delta;
  ProblemInstance certified = problem;
  if (ref.xi) certified.xi = *ref.xi;
  const ConstantSchedule s = compute_constants(certified, options);
  out << "T = " << s.horizon << '\n'
      << "eta = " << format_double(s.eta) << '\n'
      << "B = " << format_double(s.B) << (s.B_exact ? "" : " (upper bound)") << '\n'
      << "rho = " << format_double(s.rho) << '\n'
      << "H1 = " << format_double(s.h1) << '\n'
      << "H2 = " << format_double(s.h2) << '\n'
      << "epsilon1 = " << format_double(s.epsilon1) << " (information gain taken as 0)\n"
      << "epsilon2 = " << format_double(s.epsilon2) << '\n'
      << "epsilon limit min(xi/2, min_j C_j) = " << format_double(s.epsilon_limit()) << '\n'
      << "epsilon2 within limit: " << (s.epsilon_admissible(s.epsilon2) ? "yes" : "no") << '\n';
}

void cmd_report(const std::filesystem::path& dir, const std::filesystem::path& out_dir,
                std::ostream& log, bool quiet) {
  if (!std::filesystem::is_directory(dir)) throw InputError("not a directory: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (name.starts_with("trace_") && name.ends_with(".csv")) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw InputError("no trace_*.csv files in " + dir.string());

  static const std::vector<std::string> metrics = {"R_t", "V_t", "Vplus_t", "S_t", "avg_utility"};
  std::filesystem::create_directories(out_dir);
  std::ofstream longf(out_dir / "report_long.csv", std::ios::binary);
  if (!longf) throw InputError("cannot write report_long.csv");
  longf << "method,seed,t,metric,value\n";
  // (method, metric index, t) -> values across seeds
  std::map<std::tuple<std::string, std::size_t, long>, std::vector<double>> grouped;

  for (const auto& file : files) {
    const CsvTable table = read_csv(file);
    const std::string name = file.stem().string();
    const auto at = name.rfind("_seed");
    const std::string seed = at == std::string::npos ? "" : name.substr(at + 5);
    const auto methods = table.column("method");
    const auto t = table.numeric_column("t");
    std::vector<std::vector<double>> series;
    for (std::size_t k = 0; k + 1 < metrics.size(); ++k) series.push_back(table.numeric_column(metrics[k]));
    std::vector<double> utility;
    double sum = 0.0;
    for (double f : table.numeric_column("f_true")) {
      sum += f;
      utility.push_back(-sum / static_cast<double>(utility.size() + 1));
    }
    series.push_back(std::move(utility));
    for (std::size_t k = 0; k < metrics.size(); ++k) {
      for (std::size_t r = 0; r < t.size(); ++r) {
        longf << methods[r] << ',' << seed << ',' << static_cast<long>(t[r]) << ',' << metrics[k]
              << ',' << format_double(series[k][r]) << '\n';
        grouped[{methods[r], k, static_cast<long>(t[r])}].push_back(series[k][r]);
      }
    }
    if (!quiet) log << "read " << file.filename().string() << " (" << t.size() << " rounds)\n";
  }

  std::ofstream groupf(out_dir / "report_grouped.csv", std::ios::binary);
  if (!groupf) throw InputError("cannot write report_grouped.csv");
  groupf << "method,t,metric,mean,std,n\n";
  for (const auto& [key, values] : grouped) {
    const auto& [method, metric, t] = key;
    const auto [mean, sd] = mean_std(values);
    groupf << method << ',' << t << ',' << metrics[metric] << ',' << format_double(mean) << ','
           << format_double(sd) << ',' << values.size() << '\n';
  }
}

}  // namespace dmabo
