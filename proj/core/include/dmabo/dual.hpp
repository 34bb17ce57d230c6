#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "dmabo/types.hpp"

namespace dmabo {

/// Scaled dual variables: lambda for the black-box constraints (kept
/// nonnegative), mu for the affine constraints, plus the scaling eta used by
/// the primal step and the pessimistic drift epsilon added by the dual step.
struct DualState {
  Eigen::VectorXd lambda;
  Eigen::VectorXd mu;
  double eta = 1.0;
  double epsilon = 0.0;
};

/// lcb_f(x) + eta lambda^T lcb_g(x) + eta mu^T A_i x at every grid point.
/// `lcb_g[j][k]` is the lower bound of constraint j at grid point k.
std::vector<double> local_lagrangian(std::span<const double> lcb_f,
                                     std::span<const std::vector<double>> lcb_g,
                                     const Eigen::MatrixXd& affine_block, const DualState& dual,
                                     const Grid& grid);

/// Grid index minimizing the optimistic local Lagrangian; ties go to the
/// lowest index.
std::size_t primal_update(std::span<const double> lcb_f,
                          std::span<const std::vector<double>> lcb_g,
                          const Eigen::MatrixXd& affine_block, const DualState& dual,
                          const Grid& grid);

/// lambda' = [lambda + sum_lcb_g + epsilon e]^+, mu' = mu + affine_residual.
DualState dual_update(const DualState& dual, const Eigen::VectorXd& sum_lcb_g,
                      const Eigen::VectorXd& affine_residual);

}  // namespace dmabo
