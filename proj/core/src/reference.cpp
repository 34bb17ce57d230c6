#include <algorithm>
#include <limits>

#include "dmabo/error.hpp"
#include "dmabo/problems.hpp"

namespace dmabo {
namespace {

constexpr double kAffineTolerance = 1e-9;

}  // namespace

ReferenceSolution solve_reference(const ProblemInstance& problem, std::size_t cap) {
  problem.validate();
  const std::size_t n = problem.agents.size();
  const auto m = static_cast<std::size_t>(problem.num_constraints);
  const Eigen::Index l = problem.num_affine();

  double tuples = 1.0;
  for (const auto& agent : problem.agents) tuples *= static_cast<double>(agent.size());
  if (tuples > static_cast<double>(cap)) {
    throw InstanceError("product grid has " + std::to_string(tuples) +
                        " tuples, above the enumeration cap; use a coarser grid");
  }

  std::vector<std::vector<Eigen::VectorXd>> contrib(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (const Point& x : problem.agents[i].grid) contrib[i].push_back(problem.agents[i].affine * x);
  }

  ReferenceSolution best;
  best.f_star = std::numeric_limits<double>::infinity();
  double xi = -std::numeric_limits<double>::infinity();
  bool any_affine = false;

  std::vector<std::size_t> odometer(n, 0);
  std::vector<double> g(m);
  Eigen::VectorXd residual(l);
  while (true) {
    residual = -problem.b;
    for (std::size_t i = 0; i < n; ++i) residual += contrib[i][odometer[i]];
    if (residual.norm() <= kAffineTolerance) {
      any_affine = true;
      std::fill(g.begin(), g.end(), 0.0);
      double f = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const AgentProblem& agent = problem.agents[i];
        f += agent.objective[odometer[i]];
        for (std::size_t j = 0; j < m; ++j) g[j] += agent.constraints[j][odometer[i]];
      }
      const double worst = m == 0 ? 0.0 : *std::max_element(g.begin(), g.end());
      xi = std::max(xi, -worst);
      if (worst <= 0.0 && f < best.f_star) {
        best.f_star = f;
        best.indices = odometer;
      }
    }
    std::size_t pos = 0;
    while (pos < n && ++odometer[pos] == problem.agents[pos].size()) {
      odometer[pos] = 0;
      ++pos;
    }
    if (pos == n) break;
  }

  if (!any_affine) throw InstanceError("infeasible: no grid tuple satisfies the affine constraint");
  if (best.indices.empty()) {
    throw InstanceError("infeasible: no affine-feasible grid tuple satisfies sum_i g_i <= 0");
  }
  if (m > 0) best.xi = xi;
  return best;
}

}  // namespace dmabo
