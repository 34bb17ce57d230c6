#include "dmabo/constants.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <limits>

#include "dmabo/error.hpp"

namespace dmabo {
namespace {

constexpr double kAffineTolerance = 1e-9;
constexpr Eigen::Index kMaxVertexRows = 24;

Eigen::MatrixXd stacked_affine(const ProblemInstance& problem) {
  const Eigen::Index l = problem.num_affine();
  Eigen::Index n = 0;
  for (const auto& agent : problem.agents) n += agent.affine.cols();
  Eigen::MatrixXd A(l, n);
  Eigen::Index col = 0;
  for (const auto& agent : problem.agents) {
    A.middleCols(col, agent.affine.cols()) = agent.affine;
    col += agent.affine.cols();
  }
  return A;
}

struct ResidualRange {
  double max_norm = 0.0;
  double min_norm = 0.0;
  bool exact = true;
};

ResidualRange affine_residual_range(const ProblemInstance& problem, std::size_t cap) {
  const Eigen::Index l = problem.num_affine();
  if (l == 0) return {0.0, 0.0, true};

  std::vector<std::vector<Eigen::VectorXd>> contrib(problem.agents.size());
  double tuples = 1.0;
  for (std::size_t i = 0; i < problem.agents.size(); ++i) {
    const auto& agent = problem.agents[i];
    for (const Point& x : agent.grid) contrib[i].push_back(agent.affine * x);
    tuples *= static_cast<double>(agent.grid.size());
  }

  if (tuples > static_cast<double>(cap)) {
    double bound = problem.b.norm();
    for (const auto& per_agent : contrib) {
      double best = 0.0;
      for (const auto& v : per_agent) best = std::max(best, v.norm());
      bound += best;
    }
    return {bound, 0.0, false};
  }

  ResidualRange range{0.0, std::numeric_limits<double>::infinity(), true};
  std::vector<std::size_t> odometer(problem.agents.size(), 0);
  Eigen::VectorXd sum(l);
  while (true) {
    sum = -problem.b;
    for (std::size_t i = 0; i < odometer.size(); ++i) sum += contrib[i][odometer[i]];
    const double norm = sum.norm();
    range.max_norm = std::max(range.max_norm, norm);
    range.min_norm = std::min(range.min_norm, norm);
    std::size_t pos = 0;
    while (pos < odometer.size() && ++odometer[pos] == contrib[pos].size()) {
      odometer[pos] = 0;
      ++pos;
    }
    if (pos == odometer.size()) break;
  }
  return range;
}

}  // namespace

double inf_to_two_norm(const Eigen::MatrixXd& M) {
  const Eigen::Index cols = M.cols();
  if (cols == 0) return 0.0;
  if (cols > kMaxVertexRows) {
    throw InputError("inf_to_two_norm: vertex enumeration limited to 24 columns");
  }
  // y and -y give the same norm, so fix the sign of the last coordinate.
  const std::uint64_t vertices = std::uint64_t{1} << (cols - 1);
  double best = 0.0;
  Eigen::VectorXd y(cols);
  for (std::uint64_t mask = 0; mask < vertices; ++mask) {
    for (Eigen::Index k = 0; k < cols; ++k) {
      y[k] = (k + 1 < cols && ((mask >> k) & 1U)) ? -1.0 : 1.0;
    }
    best = std::max(best, (M * y).norm());
  }
  return best;
}

double rho_from_affine(const Eigen::MatrixXd& A, double tilde_rho) {
  if (!(tilde_rho > 0.0)) throw InputError("rho_from_affine: tilde_rho must be positive");
  const Eigen::Index l = A.rows();
  if (l == 0) return std::numeric_limits<double>::infinity();

  Eigen::FullPivLU<Eigen::MatrixXd> full(A);
  if (full.rank() < l) {
    throw InputError("affine matrix A is rank deficient (rank " + std::to_string(full.rank()) +
                     " < " + std::to_string(l) + "); drop the redundant rows of Ax = b");
  }

  std::vector<Eigen::Index> chosen;
  for (Eigen::Index c = 0; c < A.cols() && static_cast<Eigen::Index>(chosen.size()) < l; ++c) {
    Eigen::MatrixXd candidate(l, static_cast<Eigen::Index>(chosen.size()) + 1);
    for (std::size_t k = 0; k < chosen.size(); ++k) {
      candidate.col(static_cast<Eigen::Index>(k)) = A.col(chosen[k]);
    }
    candidate.col(candidate.cols() - 1) = A.col(c);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(candidate);
    if (lu.rank() == candidate.cols()) chosen.push_back(c);
  }

  Eigen::MatrixXd square(l, l);
  for (Eigen::Index k = 0; k < l; ++k) square.col(k) = A.col(chosen[static_cast<std::size_t>(k)]);
  const Eigen::MatrixXd inverse = square.fullPivLu().inverse();
  return tilde_rho / inf_to_two_norm(inverse);
}

double schedule_h1(double c0, double eta, double xi, double c_norm_sq, double B) {
  const double inner = 4.0 * c0 / (eta * xi) + (4.0 * c_norm_sq + 2.0 * B * B) / xi;
  return 0.5 * inner * inner;
}

double schedule_h2(double c0, double eta, double rho, int m, double c_norm_sq, double B) {
  if (std::isinf(rho)) return 0.0;
  const double factor = (1.0 + std::sqrt(static_cast<double>(m)));
  const double tail = 2.0 * c_norm_sq + B * B;
  return 4.0 * c0 * c0 / (rho * rho * eta * eta) * factor * factor +
         factor * factor / (rho * rho) * tail * tail;
}

double dual_potential_bound(double h1, double h2, double c0, double eta, double c_norm_sq,
                            double B) {
  return h1 + h2 + 2.0 * c0 / eta + 2.0 * c_norm_sq + B * B;
}

double schedule_epsilon2(double potential_bound, int horizon) {
  return std::sqrt(2.0 * potential_bound) / static_cast<double>(horizon);
}

double ConstantSchedule::epsilon_limit() const {
  double limit = std::numeric_limits<double>::infinity();
  if (c.size() > 0) limit = std::min(xi / 2.0, c.minCoeff());
  return limit;
}

double ConstantSchedule::epsilon1_with(std::span<const std::vector<double>> betas,
                                       std::span<const std::vector<double>> gammas) const {
  if (betas.size() != gammas.size()) throw InputError("epsilon1: betas/gammas size mismatch");
  double learning = 0.0;
  for (std::size_t i = 0; i < betas.size(); ++i) {
    if (betas[i].size() != gammas[i].size()) {
      throw InputError("epsilon1: per-agent betas/gammas size mismatch");
    }
    double beta_sq = 0.0;
    double gamma_sq = 0.0;
    for (std::size_t j = 0; j < betas[i].size(); ++j) {
      beta_sq += betas[i][j] * betas[i][j];
      gamma_sq += gammas[i][j] * gammas[i][j];
    }
    learning += std::sqrt(beta_sq) * std::sqrt(horizon * std::sqrt(gamma_sq));
  }
  return (std::sqrt(2.0 * potential_bound) + 8.0 * learning) / static_cast<double>(horizon);
}

double max_affine_residual(const ProblemInstance& problem, std::size_t cap, bool* exact) {
  const ResidualRange range = affine_residual_range(problem, cap);
  if (exact) *exact = range.exact;
  return range.max_norm;
}

ConstantSchedule compute_constants(const ProblemInstance& problem, const ScheduleOptions& options) {
  if (options.horizon < 1) throw InputError("compute_constants: horizon must be at least 1");
  problem.validate();
  const int n_agents = problem.num_agents();
  const int m = problem.num_constraints;
  const int l = problem.num_affine();

  ConstantSchedule s;
  s.horizon = options.horizon;
  s.eta = 1.0 / std::sqrt(static_cast<double>(options.horizon));
  s.c = Eigen::VectorXd::Zero(m);
  for (const auto& agent : problem.agents) {
    s.c0 += agent.norm_bounds[0];
    for (int j = 0; j < m; ++j) s.c[j] += agent.norm_bounds[static_cast<std::size_t>(j) + 1];
  }
  s.c_norm_sq = s.c.squaredNorm();

  const ResidualRange range = affine_residual_range(problem, options.enumeration_cap);
  if (range.exact && range.min_norm > kAffineTolerance) {
    throw InstanceError("no grid tuple satisfies the affine constraint Ax = b (closest residual " +
                        std::to_string(range.min_norm) + ")");
  }
  s.B = range.max_norm;
  s.B_exact = range.exact;

  if (l > 0 && !(problem.tilde_rho > 0.0)) {
    throw InstanceError("tilde_rho must be positive when affine constraints are present");
  }
  s.rho = l > 0 ? rho_from_affine(stacked_affine(problem), problem.tilde_rho)
                : std::numeric_limits<double>::infinity();
  s.xi = problem.xi;
  if (m > 0) {
    if (!(s.xi > 0.0)) throw InstanceError("black-box constraints need a positive slack xi");
    s.h1 = schedule_h1(s.c0, s.eta, s.xi, s.c_norm_sq, s.B);
  }
  s.h2 = schedule_h2(s.c0, s.eta, s.rho, m, s.c_norm_sq, s.B);
  s.potential_bound = dual_potential_bound(s.h1, s.h2, s.c0, s.eta, s.c_norm_sq, s.B);
  s.epsilon2 = schedule_epsilon2(s.potential_bound, options.horizon);

  std::vector<std::vector<double>> gammas(static_cast<std::size_t>(n_agents),
                                          std::vector<double>(static_cast<std::size_t>(m), 0.0));
  if (options.gamma_estimates) {
    if (options.gamma_estimates->size() != gammas.size()) {
      throw InputError("gamma estimates must have one row per agent");
    }
    gammas = *options.gamma_estimates;
  }
  std::vector<std::vector<double>> betas(gammas.size());
  for (std::size_t i = 0; i < gammas.size(); ++i) {
    if (gammas[i].size() != static_cast<std::size_t>(m)) {
      throw InputError("gamma estimates must have one entry per black-box constraint");
    }
    for (int j = 0; j < m; ++j) {
      BoundParams params{problem.norm_bound(i, static_cast<std::size_t>(j) + 1),
                         problem.noise_sigma, options.delta, n_agents, m, options.beta_mode};
      betas[i].push_back(beta(params, gammas[i][static_cast<std::size_t>(j)]));
    }
  }
  s.epsilon1 = s.epsilon1_with(betas, gammas);

  const double divisor = options.lambda1_divisor > 0.0 ? options.lambda1_divisor : m;
  s.lambda1 = m > 0 ? Eigen::VectorXd::Constant(m, std::sqrt(s.h1 / divisor))
                    : Eigen::VectorXd(0);
  s.mu1 = Eigen::VectorXd::Zero(l);
  return s;
}

}  // namespace dmabo
