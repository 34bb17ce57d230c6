#include "dmabo/algorithm.hpp"

#include <chrono>
#include <cmath>
#include <memory>

#include "dmabo/agent_model.hpp"
#include "dmabo/dual.hpp"
#include "dmabo/error.hpp"
#include "dmabo/sim.hpp"

namespace dmabo {

void AlgoConfig::validate() const {
  if (horizon < 0) throw InputError("horizon T must be nonnegative");
  if (eta && !(*eta > 0.0)) throw InputError("eta must be positive");
  if (!(model_noise > 0.0)) throw InputError("model noise lambda must be positive");
  if (!(delta > 0.0 && delta < 1.0)) throw InputError("delta must lie in (0, 1)");
  if (epsilon.kind == EpsilonMode::Kind::kManual && !(epsilon.value >= 0.0)) {
    throw InputError("manual epsilon must be nonnegative");
  }
  if (lambda1.kind == Lambda1Mode::Kind::kManual && !(lambda1.value >= 0.0)) {
    throw InputError("initial lambda must be nonnegative");
  }
  if (beta.kind == BetaMode::Kind::kConstant && !(beta.value >= 0.0)) {
    throw InputError("constant beta must be nonnegative");
  }
}

double effective_eta(const AlgoConfig& config) {
  if (config.eta) return *config.eta;
  return config.horizon > 0 ? 1.0 / std::sqrt(static_cast<double>(config.horizon)) : 1.0;
}

RunTrace run_dmabo(const ProblemInstance& problem, const AlgoConfig& config, std::uint64_t seed) {
  config.validate();
  problem.validate();
  const int n_agents = problem.num_agents();
  const int m = problem.num_constraints;
  const int l = problem.num_affine();
  const auto agents = static_cast<std::size_t>(n_agents);
  const auto outputs = static_cast<std::size_t>(m) + 1;

  RunTrace trace;
  trace.method = "dmabo";
  trace.seed = seed;
  trace.num_agents = n_agents;
  trace.num_constraints = m;
  trace.num_affine = l;

  const bool needs_schedule = config.horizon > 0 &&
                              (config.epsilon.kind != EpsilonMode::Kind::kManual ||
                               config.lambda1.kind == Lambda1Mode::Kind::kTheoretical);
  if (needs_schedule) {
    ScheduleOptions options;
    options.horizon = config.horizon;
    options.delta = config.delta;
    options.beta_mode = config.beta;
    options.lambda1_divisor = config.lambda1_divisor;
    trace.schedule = compute_constants(problem, options);
  }

  DualState dual;
  dual.eta = effective_eta(config);
  dual.lambda = config.lambda1.kind == Lambda1Mode::Kind::kTheoretical && trace.schedule
                    ? trace.schedule->lambda1
                    : Eigen::VectorXd::Constant(m, config.lambda1.value);
  dual.mu = Eigen::VectorXd::Constant(l, config.mu1);
  switch (config.epsilon.kind) {
    case EpsilonMode::Kind::kManual:
      dual.epsilon = config.epsilon.value;
      break;
    case EpsilonMode::Kind::kEpsilon2:
      dual.epsilon = trace.schedule ? trace.schedule->epsilon2 : 0.0;
      break;
    case EpsilonMode::Kind::kEpsilon1:
      dual.epsilon = trace.schedule ? trace.schedule->epsilon1 : 0.0;
      break;
  }
  trace.initial_dual = DualSnapshot{dual.lambda, dual.mu, dual.epsilon};

  std::vector<AgentOracle> oracles;
  std::vector<AgentModel> models;
  std::vector<std::shared_ptr<const Grid>> grids;
  for (std::size_t i = 0; i < agents; ++i) {
    const AgentProblem& agent = problem.agents[i];
    oracles.emplace_back(agent, problem.noise_sigma, seed, i);
    grids.push_back(std::make_shared<const Grid>(agent.grid));
    models.emplace_back(agent.kernel, config.model_noise, m, grids.back());
  }
  const Coordinator coordinator(agents, m, problem.b);
  const bool exact = config.bounds == BoundsSource::kExact;

  for (int t = 1; t <= config.horizon; ++t) {
    const auto start = std::chrono::steady_clock::now();
    try {
      RoundRecord record;
      std::vector<AgentReport> reports;
      std::vector<std::vector<double>> constraint_betas(agents);
      std::vector<std::vector<double>> constraint_gammas(agents);

      for (std::size_t i = 0; i < agents; ++i) {
        const AgentProblem& agent = problem.agents[i];
        const std::size_t size = agent.grid.size();
        std::vector<std::vector<double>> bounds(outputs, std::vector<double>(size));
        for (std::size_t j = 0; j < outputs; ++j) {
          const GPPosterior& post = models[i].output(j);
          const double gamma_prev = post.info_gain();
          const BoundParams params{agent.norm_bounds[j], problem.noise_sigma, config.delta,
                                   n_agents, m, config.beta};
          const double b = config.beta.kind == BetaMode::Kind::kConstant ? config.beta.value
                                                                         : beta(params, gamma_prev);
          if (j > 0) {
            constraint_betas[i].push_back(b);
            constraint_gammas[i].push_back(gamma_prev);
          }
          for (std::size_t k = 0; k < size; ++k) {
            if (exact) {
              bounds[j][k] = j == 0 ? agent.objective[k] : agent.constraints[j - 1][k];
            } else {
              bounds[j][k] = clipped_interval(post.grid_prediction(k), b, agent.norm_bounds[j]).lower;
            }
          }
        }
        const std::span<const std::vector<double>> lcb_g(bounds.data() + 1, outputs - 1);
        const std::size_t choice =
            primal_update(bounds[0], lcb_g, agent.affine, dual, agent.grid);

        AgentReport report;
        report.agent = i;
        report.affine_contribution = agent.affine * agent.grid[choice];
        report.lcb_constraints.resize(m);
        for (int j = 0; j < m; ++j) {
          report.lcb_constraints[j] = bounds[static_cast<std::size_t>(j) + 1][choice];
        }
        reports.push_back(std::move(report));

        std::vector<double> sigmas(outputs, 0.0);
        if (!exact) {
          for (std::size_t j = 0; j < outputs; ++j) {
            sigmas[j] = models[i].output(j).grid_prediction(choice).stddev();
          }
        }
        record.sigma_prev.push_back(std::move(sigmas));
        record.choice.push_back(choice);
        record.points.push_back(agent.grid[choice]);
      }

      if (config.epsilon.kind == EpsilonMode::Kind::kEpsilon1 && trace.schedule) {
        dual.epsilon = trace.schedule->epsilon1_with(constraint_betas, constraint_gammas);
      }
      record.sum_lcb_g = Eigen::VectorXd::Zero(m);
      for (const auto& report : reports) record.sum_lcb_g += report.lcb_constraints;
      dual = coordinator.round(reports, dual);
      record.dual = DualSnapshot{dual.lambda, dual.mu, dual.epsilon};

      record.affine_residual = -problem.b;
      for (std::size_t i = 0; i < agents; ++i) {
        const std::size_t choice = record.choice[i];
        Observation obs = oracles[i].evaluate(choice);
        if (!exact) models[i].observe(problem.agents[i].grid[choice], obs);
        const Observation truth = oracles[i].truth(choice);
        record.f_true.push_back(truth.y_f);
        record.g_true.push_back(truth.y_g);
        record.observed.push_back(std::move(obs));
        record.affine_residual += problem.agents[i].affine * problem.agents[i].grid[choice];
      }
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

}  // namespace dmabo
