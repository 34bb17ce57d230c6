#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "dmabo/confidence.hpp"
#include "dmabo/problem.hpp"

namespace dmabo {

/// rho such that the infinity-norm ball of radius rho around 0 lies in the
/// image A B(x~, tilde_rho) - b.
///
/// Picks the first l linearly independent columns of A (column order), and
/// returns tilde_rho / ||A_l^{-1}||_{inf,2}, where the operator norm is the
/// exact maximum of ||A_l^{-1} y||_2 over the 2^l sign vertices y. With l = 0
/// the ball condition is vacuous and +infinity is returned. Throws InputError
/// when A is rank deficient.
double rho_from_affine(const Eigen::MatrixXd& A, double tilde_rho);

/// ||M||_{inf,2} = max_{||y||_inf <= 1} ||M y||_2, by vertex enumeration.
double inf_to_two_norm(const Eigen::MatrixXd& M);

double schedule_h1(double c0, double eta, double xi, double c_norm_sq, double B);
double schedule_h2(double c0, double eta, double rho, int m, double c_norm_sq, double B);
/// H1 + H2 + 2 C0 / eta + 2 ||C||^2 + B^2, the bound on the dual potential.
double dual_potential_bound(double h1, double h2, double c0, double eta, double c_norm_sq,
                            double B);
/// sqrt(2 * potential_bound) / T.
double schedule_epsilon2(double potential_bound, int horizon);

/// Constants of the theoretical parameter schedule at horizon T.
struct ConstantSchedule {
  int horizon = 0;
  double eta = 0.0;
  double c0 = 0.0;                  // sum_i C_{i,0}
  Eigen::VectorXd c;                // C_j = sum_i C_{i,j}, j = 1..m
  double c_norm_sq = 0.0;           // ||C||^2
  double B = 0.0;                   // max_x ||Ax - b||
  bool B_exact = true;              // false when the enumeration cap forced an upper bound
  double rho = 0.0;
  double xi = 0.0;
  double h1 = 0.0;
  double h2 = 0.0;
  double potential_bound = 0.0;
  double epsilon1 = 0.0;            // with the information-gain estimates supplied
  double epsilon2 = 0.0;
  Eigen::VectorXd lambda1;
  Eigen::VectorXd mu1;

  /// min(xi / 2, min_j C_j); +infinity when m = 0.
  double epsilon_limit() const;
  /// The "T large enough" precondition for a given drift.
  bool epsilon_admissible(double epsilon) const { return epsilon <= epsilon_limit(); }

  /// epsilon_1 evaluated with per-agent constraint multipliers and
  /// information gains: betas[i][j], gammas[i][j] for j = 1..m (objective
  /// excluded).
  double epsilon1_with(std::span<const std::vector<double>> betas,
                       std::span<const std::vector<double>> gammas) const;
};

struct ScheduleOptions {
  int horizon = 1;
  double delta = 0.1;
  BetaMode beta_mode{};
  /// Divides H1 in lambda_1 = sqrt(H1 / divisor) e; <= 0 means "use m".
  double lambda1_divisor = 0.0;
  /// Information-gain estimates gamma^T_{i,j} (j = 1..m) used for epsilon_1;
  /// zeros when absent.
  std::optional<std::vector<std::vector<double>>> gamma_estimates;
  /// Product-grid size up to which B is enumerated exactly.
  std::size_t enumeration_cap = 1'000'000;
};

/// Assembles every constant of the schedule for `problem`. Throws InputError
/// for T < 1 and InstanceError when no grid tuple satisfies Ax = b.
ConstantSchedule compute_constants(const ProblemInstance& problem, const ScheduleOptions& options);

/// max_x ||Ax - b|| over the product grid, or the bound
/// sum_i max ||A_i x_i|| + ||b|| when the grid exceeds `cap` tuples.
/// `exact` reports which one was returned.
double max_affine_residual(const ProblemInstance& problem, std::size_t cap, bool* exact);

}  // namespace dmabo
