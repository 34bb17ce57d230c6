#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "dmabo/agent_model.hpp"
#include "dmabo/gp_posterior.hpp"
#include "dmabo/problem.hpp"
#include "dmabo/trace.hpp"

namespace dmabo {

double normal_pdf(double z);
double normal_cdf(double z);

/// Expected improvement below `incumbent` (minimization):
/// (incumbent - mu) Phi(z) + sigma phi(z), z = (incumbent - mu) / sigma;
/// max(incumbent - mu, 0) when sigma = 0.
double expected_improvement(const Prediction& prediction, double incumbent);
double expected_improvement(const GPPosterior& post, double incumbent, const Point& x);

/// P(g <= threshold) under the posterior; a step function when sigma = 0
/// (one half exactly at the threshold).
double feasibility_probability(const Prediction& prediction, double threshold);

/// Constrained EI of every grid point of `model`'s grid: EI of the objective
/// times prod_j P(g_j <= thresholds[j]). Without an incumbent the EI factor is
/// dropped (pure probability of feasibility).
std::vector<double> cei_acquisition(const AgentModel& model, std::optional<double> incumbent,
                                    std::span<const double> thresholds);

/// Grid index maximizing cei_acquisition; ties go to the lowest index.
std::size_t cei_step(const AgentModel& model, std::optional<double> incumbent,
                     std::span<const double> thresholds);

/// Grid index maximizing cei_acquisition - Q ||x - target||^2.
std::size_t penalty_step(const AgentModel& model, std::optional<double> incumbent,
                         std::span<const double> thresholds, const Point& target, double q);

/// Euclidean projection of the joint decision onto sum_i A_i x_i = b, each
/// block then clipped to its agent's grid bounding box. With A_i = 1 this is
/// the uniform correction x_i - (sum x - b) / N.
std::vector<Point> coordination_targets(const ProblemInstance& problem,
                                        const std::vector<Point>& decisions);

struct BaselineConfig {
  int horizon = 0;
  double model_noise = 0.0004;
  /// Multiplier of the lower bounds other agents share to localize the
  /// coupled constraint.
  double beta = 3.0;
  double penalty_q = 5.0;

  bool operator==(const BaselineConfig&) const = default;
};

/// Distributed simultaneous constrained EI. Every agent starts at its grid
/// midpoint; afterwards agent i maximizes constrained EI with the others held
/// at last round's decisions, reading the coupled constraint sum_k g_k <= 0 as
/// g_i <= -sum_{k != i} lcb_{g_k}(x_k^{t-1}). The incumbent is the best
/// observed objective among an agent's own samples with every observed g <= 0.
RunTrace run_dcei(const ProblemInstance& problem, const BaselineConfig& config, std::uint64_t seed);

/// EI pulled toward a coordination target with weight Q: targets are last
/// round's decisions projected onto the affine constraint.
RunTrace run_penalty(const ProblemInstance& problem, const BaselineConfig& config,
                     std::uint64_t seed);

}  // namespace dmabo
