#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "dmabo/problem.hpp"
#include "dmabo/trace.hpp"

namespace dmabo {

/// R_t = sum_{tau <= t} (sum_i f_i(x_i^tau) - f*). Can go negative when
/// infeasible samples beat the constrained optimum.
std::vector<double> regret_trace(const RunTrace& trace, double f_star);

/// V_t = || [sum_{tau <= t} g(x^tau)]^+ ||_2, cancellation across rounds allowed.
std::vector<double> violation_trace(const RunTrace& trace);

/// V+_t = || sum_{tau <= t} [g(x^tau)]^+ ||_1, no cancellation. For m = 1
/// this is the plain sum of positive parts.
std::vector<double> strong_violation_trace(const RunTrace& trace);

/// S_t = || sum_{tau <= t} (A x^tau - b) ||_2, recomputed from the sampled
/// points (the recorded residual column is not trusted).
std::vector<double> shift_trace(const RunTrace& trace, const ProblemInstance& problem);

/// -(sum_{tau <= t} sum_i f_i(x_i^tau)) / t; for power allocation this is the
/// average total utility.
std::vector<double> average_utility_trace(const RunTrace& trace);

struct BestIterate {
  std::size_t round = 0;  // 0-based
  std::vector<std::size_t> choice;
  double total_f = 0.0;
};

/// Sampled tuple with sum_i g_i <= 0 (every constraint) and the least
/// sum_i f_i; the earliest wins ties. Absent when no sample is feasible.
std::optional<BestIterate> best_iterate(const RunTrace& trace);

/// Share of rounds in which `agent` picked grid index `index`; 0 for T = 0.
double selection_fraction(const RunTrace& trace, std::size_t agent, std::size_t index);

/// 1/2 ||lambda||^2 + 1/2 ||mu||^2.
double dual_potential(const DualSnapshot& dual);

}  // namespace dmabo
