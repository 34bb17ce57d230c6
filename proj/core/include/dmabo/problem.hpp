#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "dmabo/kernel.hpp"
#include "dmabo/types.hpp"

namespace dmabo {

/// One agent's share of the problem: a finite local domain with the black-box
/// objective and constraint values tabulated on it, its block A_i of the
/// affine constraint, and the norm bounds used to clip confidence intervals.
struct AgentProblem {
  Grid grid;
  std::vector<double> objective;                 // f_i at each grid point
  std::vector<std::vector<double>> constraints;  // [j][k] = g_{i,j} at grid point k
  Eigen::MatrixXd affine;                        // l x n_i
  std::vector<double> norm_bounds;               // C_{i,0} (objective), C_{i,1..m}
  KernelSpec kernel;

  std::size_t size() const { return grid.size(); }
  std::size_t dimension() const { return grid.empty() ? 0 : static_cast<std::size_t>(grid.front().size()); }
};

/// Constrained optimum found by exhaustive enumeration.
struct ReferenceSolution {
  std::vector<std::size_t> indices;  // per-agent grid index of x*
  double f_star = 0.0;
  /// Largest slack max_x min_j (-sum_i g_{i,j}(x_i)) over affine-feasible tuples;
  /// absent when there are no black-box constraints.
  std::optional<double> xi;
};

struct ProblemInstance {
  std::string kind = "custom";
  std::vector<AgentProblem> agents;
  int num_constraints = 0;  // m
  Eigen::VectorXd b;        // right-hand side of sum_i A_i x_i = b; size l
  double noise_sigma = 0.0;
  double xi = 0.0;          // certified Slater slack
  double tilde_rho = 1.0;   // radius of the feasible ball used to derive rho
  std::optional<ReferenceSolution> reference;
  std::map<std::string, std::vector<double>> metadata;

  int num_agents() const { return static_cast<int>(agents.size()); }
  int num_affine() const { return static_cast<int>(b.size()); }
  double norm_bound(std::size_t agent, std::size_t output) const {
    return agents[agent].norm_bounds[output];
  }

  /// Structural checks (sizes, nonempty grids, positive bounds). Throws InstanceError.
  void validate() const;

  /// sum_i A_i x_i - b for a tuple of grid indices.
  Eigen::VectorXd affine_residual(const std::vector<std::size_t>& indices) const;
};

}  // namespace dmabo
