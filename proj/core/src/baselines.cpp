#include "dmabo/baselines.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <numbers>

#include "dmabo/confidence.hpp"
#include "dmabo/error.hpp"
#include "dmabo/sim.hpp"

namespace dmabo {

double normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); }

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double expected_improvement(const Prediction& prediction, double incumbent) {
  const double gap = incumbent - prediction.mean;
  const double sigma = prediction.stddev();
  if (sigma <= 0.0) return std::max(gap, 0.0);
  const double z = gap / sigma;
  return std::max(gap * normal_cdf(z) + sigma * normal_pdf(z), 0.0);
}

double expected_improvement(const GPPosterior& post, double incumbent, const Point& x) {
  return expected_improvement(post.predict(x), incumbent);
}

double feasibility_probability(const Prediction& prediction, double threshold) {
  const double gap = threshold - prediction.mean;
  const double sigma = prediction.stddev();
  if (sigma <= 0.0) return gap > 0.0 ? 1.0 : (gap < 0.0 ? 0.0 : 0.5);
  return normal_cdf(gap / sigma);
}

std::vector<double> cei_acquisition(const AgentModel& model, std::optional<double> incumbent,
                                    std::span<const double> thresholds) {
  if (thresholds.size() + 1 != model.num_outputs()) {
    throw InputError("one threshold per constraint expected");
  }
  const std::size_t size = model.grid().size();
  std::vector<double> acq(size);
  for (std::size_t k = 0; k < size; ++k) {
    double value = incumbent ? expected_improvement(model.output(0).grid_prediction(k), *incumbent)
                             : 1.0;
    for (std::size_t j = 0; j < thresholds.size(); ++j) {
      value *= feasibility_probability(model.output(j + 1).grid_prediction(k), thresholds[j]);
    }
    acq[k] = value;
  }
  return acq;
}

namespace {

std::size_t argmax_lowest(const std::vector<double>& values) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < values.size(); ++k) {
    if (values[k] > values[best]) best = k;
  }
  return best;
}

}  // namespace

std::size_t cei_step(const AgentModel& model, std::optional<double> incumbent,
                     std::span<const double> thresholds) {
  return argmax_lowest(cei_acquisition(model, incumbent, thresholds));
}

std::size_t penalty_step(const AgentModel& model, std::optional<double> incumbent,
                         std::span<const double> thresholds, const Point& target, double q) {
  if (!(q >= 0.0)) throw InputError("penalty weight must be nonnegative");
  std::vector<double> acq = cei_acquisition(model, incumbent, thresholds);
  const Grid& grid = model.grid();
  if (std::isinf(q)) {
    for (std::size_t k = 0; k < acq.size(); ++k) acq[k] = -(grid[k] - target).squaredNorm();
  } else if (q > 0.0) {
    for (std::size_t k = 0; k < acq.size(); ++k) acq[k] -= q * (grid[k] - target).squaredNorm();
  }
  return argmax_lowest(acq);
}

std::vector<Point> coordination_targets(const ProblemInstance& problem,
                                        const std::vector<Point>& decisions) {
  const std::size_t n = problem.agents.size();
  if (decisions.size() != n) throw InputError("one decision per agent expected");
  std::vector<Point> targets = decisions;
  const Eigen::Index l = problem.num_affine();
  if (l > 0) {
    Eigen::VectorXd residual = -problem.b;
    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(l, l);
    for (std::size_t i = 0; i < n; ++i) {
      residual += problem.agents[i].affine * decisions[i];
      gram += problem.agents[i].affine * problem.agents[i].affine.transpose();
    }
    const Eigen::VectorXd w = gram.fullPivLu().solve(residual);
    for (std::size_t i = 0; i < n; ++i) {
      targets[i] -= problem.agents[i].affine.transpose() * w;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    const Grid& grid = problem.agents[i].grid;
    Point lo = grid.front();
    Point hi = grid.front();
    for (const Point& x : grid) {
      lo = lo.cwiseMin(x);
      hi = hi.cwiseMax(x);
    }
    targets[i] = targets[i].cwiseMax(lo).cwiseMin(hi);
  }
  return targets;
}

namespace {

enum class Baseline { kCei, kPenalty };

RunTrace run_baseline(const ProblemInstance& problem, const BaselineConfig& config,
                      std::uint64_t seed, Baseline kind) {
  problem.validate();
  if (config.horizon < 0) throw InputError("horizon T must be nonnegative");
  if (!(config.model_noise > 0.0)) throw InputError("model noise lambda must be positive");
  const std::size_t n = problem.agents.size();
  const auto m = static_cast<std::size_t>(problem.num_constraints);

  RunTrace trace;
  trace.method = kind == Baseline::kCei ? "dcei" : "penalty";
  trace.seed = seed;
  trace.num_agents = problem.num_agents();
  trace.num_constraints = problem.num_constraints;
  trace.num_affine = problem.num_affine();

  std::vector<AgentOracle> oracles;
  std::vector<AgentModel> models;
  for (std::size_t i = 0; i < n; ++i) {
    const AgentProblem& agent = problem.agents[i];
    oracles.emplace_back(agent, problem.noise_sigma, seed, i);
    models.emplace_back(agent.kernel, config.model_noise, problem.num_constraints,
                        std::make_shared<const Grid>(agent.grid));
  }
  std::vector<std::optional<double>> incumbent(n);
  std::vector<std::size_t> last(n);

  for (int t = 1; t <= config.horizon; ++t) {
    const auto start = std::chrono::steady_clock::now();
    try {
      RoundRecord record;
      std::vector<std::size_t> choice(n);
      if (t == 1) {
        for (std::size_t i = 0; i < n; ++i) choice[i] = problem.agents[i].size() / 2;
      } else {
        // Lower bounds of each agent's constraints at its previous decision.
        std::vector<std::vector<double>> shared(n, std::vector<double>(m));
        for (std::size_t i = 0; i < n; ++i) {
          for (std::size_t j = 0; j < m; ++j) {
            shared[i][j] = clipped_interval(models[i].output(j + 1).grid_prediction(last[i]),
                                            config.beta, problem.agents[i].norm_bounds[j + 1])
                               .lower;
          }
        }
        std::vector<Point> previous;
        for (std::size_t i = 0; i < n; ++i) previous.push_back(problem.agents[i].grid[last[i]]);
        const std::vector<Point> targets =
            kind == Baseline::kPenalty ? coordination_targets(problem, previous) : previous;
        for (std::size_t i = 0; i < n; ++i) {
          std::vector<double> thresholds(m, 0.0);
          for (std::size_t k = 0; k < n; ++k) {
            if (k == i) continue;
            for (std::size_t j = 0; j < m; ++j) thresholds[j] -= shared[k][j];
          }
          choice[i] = kind == Baseline::kCei
                          ? cei_step(models[i], incumbent[i], thresholds)
                          : penalty_step(models[i], incumbent[i], thresholds, targets[i],
                                         config.penalty_q);
        }
      }

      record.affine_residual = -problem.b;
      for (std::size_t i = 0; i < n; ++i) {
        const AgentProblem& agent = problem.agents[i];
        std::vector<double> sigmas;
        for (std::size_t j = 0; j <= m; ++j) {
          sigmas.push_back(models[i].output(j).grid_prediction(choice[i]).stddev());
        }
        record.sigma_prev.push_back(std::move(sigmas));
        Observation obs = oracles[i].evaluate(choice[i]);
        models[i].observe(agent.grid[choice[i]], obs);
        const bool feasible =
            std::all_of(obs.y_g.begin(), obs.y_g.end(), [](double g) { return g <= 0.0; });
        if (feasible && (!incumbent[i] || obs.y_f < *incumbent[i])) incumbent[i] = obs.y_f;
        const Observation truth = oracles[i].truth(choice[i]);
        record.choice.push_back(choice[i]);
        record.points.push_back(agent.grid[choice[i]]);
        record.f_true.push_back(truth.y_f);
        record.g_true.push_back(truth.y_g);
        record.observed.push_back(std::move(obs));
        record.affine_residual += agent.affine * agent.grid[choice[i]];
      }
      last = choice;
      record.wall_seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      trace.rounds.push_back(std::move(record));
    } catch (const NumericalError& e) {
      throw NumericalError(e.what(), t);
    }
  }
  for (const auto& model : models) trace.info_gain.push_back(model.info_gains());
  return trace;
}

}  // namespace

RunTrace run_dcei(const ProblemInstance& problem, const BaselineConfig& config, std::uint64_t seed) {
  return run_baseline(problem, config, seed, Baseline::kCei);
}

RunTrace run_penalty(const ProblemInstance& problem, const BaselineConfig& config,
                     std::uint64_t seed) {
  return run_baseline(problem, config, seed, Baseline::kPenalty);
}

}  // namespace dmabo
