#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "dmabo/kernel.hpp"
#include "dmabo/problem.hpp"

namespace dmabo {

/// Slack every synthetic instance is shifted to, at least.
inline constexpr double kMinSyntheticSlack = 0.05;

/// N agents on a uniform grid over [-1, 1], objective and m constraints drawn
/// from GP(0, kernel), no affine constraint. When the certified slack falls
/// below kMinSyntheticSlack, every g_{i,j} is lowered by the same constant
/// (missing slack / N); f is never touched. Norm bounds are 1.2 times the
/// largest absolute tabulated value of each function.
ProblemInstance make_gp_instance(int num_agents, int num_constraints, const KernelSpec& kernel,
                                 std::size_t grid_size, std::uint64_t seed,
                                 double noise_sigma = 0.02);

struct PowerAllocationSpec {
  int num_agents = 3;
  double budget = 2.0;  // P
  std::vector<double> p_min;  // empty: all 0
  std::vector<double> p_max;  // empty: all 1
  double spacing = 0.05;
  std::uint64_t utility_seed = 0;
  /// Explicit utility coefficients U_i(p) = a_i ln(1 + b_i p); drawn from
  /// a in [0.5, 2], b in [0.5, 3] when empty.
  std::vector<double> a;
  std::vector<double> b;
  double noise_sigma = 0.02;
  double xi = 1.0;
  KernelSpec kernel = KernelSpec::squared_exponential(0.2);
};

/// a ln(1 + b p).
double power_utility(double a, double b, double p);

/// Agents minimize -U_i(p_i) on p_min + k * spacing subject to sum_i p_i = P.
/// Throws InstanceError when no grid tuple can hit the budget exactly (the
/// message suggests a spacing that divides P - sum p_min) or when the budget
/// lies outside [sum p_min, sum p_max].
ProblemInstance make_power_allocation(const PowerAllocationSpec& spec);

/// Single agent on {-1, 0, 1} with f = (1, 0.5, -1) and g = (-1, 0, 2): the
/// constrained optimum x = 0 sits where the constraint is tight, and a
/// primal-dual iteration with exact bounds cycles between the two neighbours
/// without ever selecting it.
ProblemInstance make_oscillation_example();

/// Exhaustive search over the product grid: keeps tuples with
/// ||Ax - b|| <= 1e-9 and sum_i g_i(x_i) <= 0 and returns the one with the
/// smallest sum_i f_i (first in odometer order on ties, agent 0 fastest).
/// Throws InstanceError when the grid has more than `cap` tuples or when no
/// tuple is feasible.
ReferenceSolution solve_reference(const ProblemInstance& problem, std::size_t cap = 10'000'000);

}  // namespace dmabo
