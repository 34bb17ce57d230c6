#include "dmabo/metrics.hpp"

#include <limits>

namespace dmabo {

std::vector<double> regret_trace(const RunTrace& trace, double f_star) {
  std::vector<double> out;
  out.reserve(trace.rounds.size());
  double sum = 0.0;
  for (const auto& r : trace.rounds) {
    sum += r.total_f() - f_star;
    out.push_back(sum);
  }
  return out;
}

std::vector<double> violation_trace(const RunTrace& trace) {
  std::vector<double> out;
  out.reserve(trace.rounds.size());
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(trace.num_constraints);
  for (const auto& r : trace.rounds) {
    sum += r.total_g();
    out.push_back(sum.cwiseMax(0.0).norm());
  }
  return out;
}

std::vector<double> strong_violation_trace(const RunTrace& trace) {
  std::vector<double> out;
  out.reserve(trace.rounds.size());
  double sum = 0.0;
  for (const auto& r : trace.rounds) {
    sum += r.total_g().cwiseMax(0.0).sum();
    out.push_back(sum);
  }
  return out;
}

std::vector<double> shift_trace(const RunTrace& trace, const ProblemInstance& problem) {
  std::vector<double> out;
  out.reserve(trace.rounds.size());
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(problem.num_affine());
  for (const auto& r : trace.rounds) {
    sum -= problem.b;
    for (std::size_t i = 0; i < r.points.size(); ++i) sum += problem.agents[i].affine * r.points[i];
    out.push_back(sum.norm());
  }
  return out;
}

std::vector<double> average_utility_trace(const RunTrace& trace) {
  std::vector<double> out;
  out.reserve(trace.rounds.size());
  double sum = 0.0;
  for (std::size_t t = 0; t < trace.rounds.size(); ++t) {
    sum += trace.rounds[t].total_f();
    out.push_back(-sum / static_cast<double>(t + 1));
  }
  return out;
}

std::optional<BestIterate> best_iterate(const RunTrace& trace) {
  std::optional<BestIterate> best;
  for (std::size_t t = 0; t < trace.rounds.size(); ++t) {
    const auto& r = trace.rounds[t];
    if (r.total_g().size() > 0 && r.total_g().maxCoeff() > 0.0) continue;
    const double f = r.total_f();
    if (!best || f < best->total_f) best = BestIterate{t, r.choice, f};
  }
  return best;
}

double selection_fraction(const RunTrace& trace, std::size_t agent, std::size_t index) {
  if (trace.rounds.empty()) return 0.0;
  std::size_t hits = 0;
  for (const auto& r : trace.rounds) hits += r.choice.at(agent) == index ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(trace.rounds.size());
}

double dual_potential(const DualSnapshot& dual) {
  return 0.5 * dual.lambda.squaredNorm() + 0.5 * dual.mu.squaredNorm();
}

}  // namespace dmabo
