#include "dmabo/problems.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "dmabo/error.hpp"
#include "dmabo/prior_sampling.hpp"
#include "dmabo/sim.hpp"

namespace dmabo {
namespace {

constexpr double kNormBoundFactor = 1.2;
constexpr double kBudgetTolerance = 1e-9;

double norm_bound_of(const std::vector<double>& values) {
  double largest = 0.0;
  for (double v : values) largest = std::max(largest, std::abs(v));
  return std::max(kNormBoundFactor * largest, 1e-6);
}

}  // namespace

void ProblemInstance::validate() const {
  if (agents.empty()) throw InstanceError("instance has no agents");
  if (num_constraints < 0) throw InstanceError("number of constraints must be nonnegative");
  if (!(noise_sigma >= 0.0)) throw InstanceError("noise sigma must be nonnegative");
  if (!(tilde_rho > 0.0)) throw InstanceError("tilde_rho must be positive");
  const auto m = static_cast<std::size_t>(num_constraints);
  for (std::size_t i = 0; i < agents.size(); ++i) {
    const AgentProblem& a = agents[i];
    const std::string who = "agent " + std::to_string(i) + ": ";
    if (a.grid.empty()) throw InstanceError(who + "empty grid");
    const auto dim = a.grid.front().size();
    for (const Point& x : a.grid) {
      if (x.size() != dim) throw InstanceError(who + "grid points of mixed dimension");
    }
    if (a.objective.size() != a.grid.size()) throw InstanceError(who + "objective size mismatch");
    if (a.constraints.size() != m) throw InstanceError(who + "wrong number of constraints");
    for (const auto& g : a.constraints) {
      if (g.size() != a.grid.size()) throw InstanceError(who + "constraint size mismatch");
    }
    if (a.affine.rows() != b.size() || a.affine.cols() != dim) {
      throw InstanceError(who + "affine block must be l x n_i");
    }
    if (a.norm_bounds.size() != m + 1) throw InstanceError(who + "need m + 1 norm bounds");
    for (double c : a.norm_bounds) {
      if (!(c > 0.0)) throw InstanceError(who + "norm bounds must be positive");
    }
    if (a.kernel.dimension() != static_cast<std::size_t>(dim)) {
      throw InstanceError(who + "kernel dimension does not match the grid");
    }
  }
}

Eigen::VectorXd ProblemInstance::affine_residual(const std::vector<std::size_t>& indices) const {
  if (indices.size() != agents.size()) throw InputError("one grid index per agent expected");
  Eigen::VectorXd r = -b;
  for (std::size_t i = 0; i < agents.size(); ++i) {
    if (indices[i] >= agents[i].grid.size()) throw InputError("grid index out of range");
    r += agents[i].affine * agents[i].grid[indices[i]];
  }
  return r;
}

ProblemInstance make_gp_instance(int num_agents, int num_constraints, const KernelSpec& kernel,
                                 std::size_t grid_size, std::uint64_t seed, double noise_sigma) {
  if (num_agents < 1) throw InputError("need at least one agent");
  if (num_constraints < 0) throw InputError("number of constraints must be nonnegative");
  if (grid_size < 1) throw InputError("grid size must be positive");
  if (kernel.dimension() != 1) throw InputError("synthetic instances are one-dimensional");
  kernel.validate();

  ProblemInstance problem;
  problem.kind = "gp";
  problem.num_constraints = num_constraints;
  problem.b = Eigen::VectorXd(0);
  problem.noise_sigma = noise_sigma;
  const Grid grid = uniform_grid_1d(-1.0, 1.0, grid_size);
  for (int i = 0; i < num_agents; ++i) {
    AgentProblem agent;
    agent.grid = grid;
    agent.kernel = kernel;
    agent.affine = Eigen::MatrixXd(0, 1);
    const auto ai = static_cast<std::uint64_t>(i);
    agent.objective = sample_prior_function(kernel, grid, derive_seed(seed, ai, 0)).values;
    for (int j = 1; j <= num_constraints; ++j) {
      agent.constraints.push_back(
          sample_prior_function(kernel, grid, derive_seed(seed, ai, static_cast<std::uint64_t>(j)))
              .values);
    }
    problem.agents.push_back(std::move(agent));
  }

  if (num_constraints > 0) {
    // l = 0, so every tuple is affine-feasible: xi is the best worst-constraint margin.
    double slack = -std::numeric_limits<double>::infinity();
    std::vector<std::size_t> odometer(problem.agents.size(), 0);
    const auto m = static_cast<std::size_t>(num_constraints);
    while (true) {
      double worst = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < m; ++j) {
        double sum = 0.0;
        for (std::size_t i = 0; i < odometer.size(); ++i) {
          sum += problem.agents[i].constraints[j][odometer[i]];
        }
        worst = std::min(worst, -sum);
      }
      slack = std::max(slack, worst);
      std::size_t pos = 0;
      while (pos < odometer.size() && ++odometer[pos] == grid_size) {
        odometer[pos] = 0;
        ++pos;
      }
      if (pos == odometer.size()) break;
    }
    if (slack < kMinSyntheticSlack) {
      const double shift = (kMinSyntheticSlack - slack) / num_agents;
      for (auto& agent : problem.agents) {
        for (auto& g : agent.constraints) {
          for (double& v : g) v -= shift;
        }
      }
    }
  }

  for (auto& agent : problem.agents) {
    agent.norm_bounds.push_back(norm_bound_of(agent.objective));
    for (const auto& g : agent.constraints) agent.norm_bounds.push_back(norm_bound_of(g));
  }
  problem.validate();
  problem.reference = solve_reference(problem);
  problem.xi = problem.reference->xi.value_or(0.0);
  if (num_constraints > 0 && problem.xi < kMinSyntheticSlack - 1e-9) {
    throw InstanceError("synthetic instance could not be shifted to the required slack");
  }
  return problem;
}

double power_utility(double a, double b, double p) { return a * std::log1p(b * p); }

ProblemInstance make_power_allocation(const PowerAllocationSpec& spec) {
  const int n = spec.num_agents;
  if (n < 1) throw InputError("need at least one agent");
  if (!(spec.spacing > 0.0)) throw InputError("grid spacing must be positive");
  const auto count = static_cast<std::size_t>(n);
  auto fill = [&](const std::vector<double>& v, double dflt, const char* name) {
    if (v.empty()) return std::vector<double>(count, dflt);
    if (v.size() != count) throw InputError(std::string(name) + " needs one entry per agent");
    return v;
  };
  const std::vector<double> lo = fill(spec.p_min, 0.0, "p_min");
  const std::vector<double> hi = fill(spec.p_max, 1.0, "p_max");
  std::vector<double> a = spec.a;
  std::vector<double> b = spec.b;
  if (a.empty() != b.empty()) throw InputError("give both utility coefficient lists or neither");
  if (a.empty()) {
    std::mt19937_64 rng(spec.utility_seed);
    std::uniform_real_distribution<double> da(0.5, 2.0);
    std::uniform_real_distribution<double> db(0.5, 3.0);
    for (std::size_t i = 0; i < count; ++i) {
      a.push_back(da(rng));
      b.push_back(db(rng));
    }
  }
  a = fill(a, 1.0, "a");
  b = fill(b, 1.0, "b");

  double sum_lo = 0.0;
  double sum_hi = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    if (!(hi[i] >= lo[i])) throw InputError("p_max must be at least p_min");
    sum_lo += lo[i];
    sum_hi += hi[i];
  }
  if (spec.budget < sum_lo - kBudgetTolerance || spec.budget > sum_hi + kBudgetTolerance) {
    throw InstanceError("budget must lie between sum of p_min and sum of p_max");
  }
  const double steps = (spec.budget - sum_lo) / spec.spacing;
  if (std::abs(steps - std::round(steps)) > 1e-9 * std::max(1.0, std::abs(steps))) {
    std::ostringstream msg;
    msg << "no grid tuple sums to the budget: (P - sum p_min) / spacing = " << steps
        << " is not an integer; try spacing = " << (spec.budget - sum_lo) / std::ceil(steps);
    throw InstanceError(msg.str());
  }

  ProblemInstance problem;
  problem.kind = "power";
  problem.num_constraints = 0;
  problem.b = Eigen::VectorXd::Constant(1, spec.budget);
  problem.noise_sigma = spec.noise_sigma;
  problem.xi = spec.xi;
  problem.metadata["utility_a"] = a;
  problem.metadata["utility_b"] = b;
  problem.metadata["budget"] = {spec.budget};

  // Centre of the budget hyperplane inside the box; its distance to the box
  // faces is the feasible radius.
  double radius = std::numeric_limits<double>::infinity();
  const double share = sum_hi > sum_lo ? (spec.budget - sum_lo) / (sum_hi - sum_lo) : 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    const double centre = lo[i] + share * (hi[i] - lo[i]);
    radius = std::min({radius, centre - lo[i], hi[i] - centre});
  }
  problem.tilde_rho = radius > 0.0 ? radius : spec.spacing;

  for (std::size_t i = 0; i < count; ++i) {
    AgentProblem agent;
    const auto points =
        static_cast<std::size_t>(std::floor((hi[i] - lo[i]) / spec.spacing + 1e-9)) + 1;
    for (std::size_t k = 0; k < points; ++k) {
      const double p = lo[i] + static_cast<double>(k) * spec.spacing;
      agent.grid.push_back(Point::Constant(1, p));
      agent.objective.push_back(-power_utility(a[i], b[i], p));
    }
    agent.affine = Eigen::MatrixXd::Identity(1, 1);
    agent.kernel = spec.kernel;
    agent.norm_bounds.push_back(norm_bound_of(agent.objective));
    problem.agents.push_back(std::move(agent));
  }
  problem.validate();
  problem.reference = solve_reference(problem);
  return problem;
}

ProblemInstance make_oscillation_example() {
  ProblemInstance problem;
  problem.kind = "oscillation";
  problem.num_constraints = 1;
  problem.b = Eigen::VectorXd(0);
  problem.noise_sigma = 0.0;

  AgentProblem agent;
  agent.grid = uniform_grid_1d(-1.0, 1.0, 3);
  agent.objective = {1.0, 0.5, -1.0};
  agent.constraints = {{-1.0, 0.0, 2.0}};
  agent.affine = Eigen::MatrixXd(0, 1);
  agent.norm_bounds = {1.2, 2.4};
  agent.kernel = KernelSpec::squared_exponential(0.5);
  problem.agents.push_back(std::move(agent));

  problem.validate();
  problem.reference = solve_reference(problem);
  problem.xi = problem.reference->xi.value_or(0.0);
  return problem;
}

}  // namespace dmabo
