#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "dmabo/constants.hpp"
#include "dmabo/sim.hpp"
#include "dmabo/types.hpp"

namespace dmabo {

struct DualSnapshot {
  Eigen::VectorXd lambda;
  Eigen::VectorXd mu;
  double epsilon = 0.0;
};

/// Everything that happened in one round. The ground-truth columns (f_true,
/// g_true) are written for scoring only; no algorithm reads them back.
struct RoundRecord {
  std::vector<std::size_t> choice;          // grid index per agent
  std::vector<Point> points;                // x_i^t
  std::vector<double> f_true;               // f_i(x_i^t)
  std::vector<std::vector<double>> g_true;  // g_{i,j}(x_i^t)
  std::vector<Observation> observed;        // noisy oracle answers
  Eigen::VectorXd affine_residual;          // sum_i A_i x_i^t - b
  Eigen::VectorXd sum_lcb_g;                // what the coordinator received (DMABO only)
  std::optional<DualSnapshot> dual;         // state after this round's dual step
  std::vector<std::vector<double>> sigma_prev;  // sigma_{t-1}(x_i^t) per agent, output
  double wall_seconds = 0.0;

  double total_f() const;
  Eigen::VectorXd total_g() const;  // sum_i g_i(x_i^t), size m
};

struct RunTrace {
  std::string method;
  std::uint64_t seed = 0;
  int num_agents = 0;
  int num_constraints = 0;
  int num_affine = 0;
  std::optional<DualSnapshot> initial_dual;
  std::optional<ConstantSchedule> schedule;
  std::vector<RoundRecord> rounds;
  /// Running information gain per agent and output at the end of the run.
  std::vector<std::vector<double>> info_gain;

  std::size_t horizon() const { return rounds.size(); }
};

}  // namespace dmabo
