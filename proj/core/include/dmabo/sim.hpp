#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "dmabo/dual.hpp"
#include "dmabo/problem.hpp"

namespace dmabo {

/// Seed of the substream (a, b) of a master seed. Substreams depend only on
/// their own coordinates, so adding agents or rounds never reshuffles the
/// noise another agent sees.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b);

/// One noisy zero-order query: objective and the m constraint values.
struct Observation {
  double y_f = 0.0;
  std::vector<double> y_g;
};

/// Agent i's local black-box oracle. Values are tabulated on the agent's
/// grid; every output (objective, each constraint) draws its Gaussian noise
/// from its own stream derived from (master seed, agent, output).
class AgentOracle {
 public:
  AgentOracle(const AgentProblem& agent, double noise_sigma, std::uint64_t master_seed,
              std::size_t agent_id);

  /// Noisy evaluation at grid index `index`. Throws InputError out of range.
  Observation evaluate(std::size_t index);
  /// Noisy evaluation at a point, which must lie on the grid.
  Observation evaluate(const Point& x);

  /// Noise-free values. Used for scoring and by the exact-bounds diagnostic
  /// mode, never by the learning path.
  Observation truth(std::size_t index) const;

  /// Grid index of x; throws InputError when x is not a grid point.
  std::size_t index_of(const Point& x) const;

  std::size_t agent_id() const { return agent_id_; }
  double noise_sigma() const { return sigma_; }

 private:
  Grid grid_;
  std::vector<double> objective_;
  std::vector<std::vector<double>> constraints_;
  double sigma_;
  std::size_t agent_id_;
  // One distribution per stream: normal_distribution caches a spare draw.
  std::vector<std::mt19937_64> streams_;
  std::vector<std::normal_distribution<double>> normals_;
};

/// What an agent sends to the coordinator after its primal step. It carries
/// no observations: only A_i x_i and the constraint lower bounds at x_i.
struct AgentReport {
  std::size_t agent = 0;
  Eigen::VectorXd affine_contribution;  // A_i x_i, size l
  Eigen::VectorXd lcb_constraints;      // lcb_{g_i}(x_i), size m
};

/// Central reducer for the dual step: sums the reports, subtracts b and
/// applies dual_update. Stateless apart from the problem dimensions.
class Coordinator {
 public:
  Coordinator(std::size_t num_agents, int num_constraints, Eigen::VectorXd b);

  /// Throws ProtocolError unless there is exactly one report per agent with
  /// the right dimensions.
  DualState round(std::span<const AgentReport> reports, const DualState& dual) const;

  std::size_t num_agents() const { return num_agents_; }

 private:
  std::size_t num_agents_;
  int num_constraints_;
  Eigen::VectorXd b_;
};

}  // namespace dmabo
