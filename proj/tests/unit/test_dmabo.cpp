#include <cmath>
#include <limits>
#include <vector>

#include <gtest/gtest.h>

#include "dmabo/algorithm.hpp"
#include "dmabo/constants.hpp"
#include "dmabo/dual.hpp"
#include "dmabo/error.hpp"
#include "dmabo/metrics.hpp"
#include "dmabo/problems.hpp"
#include "oracles.hpp"

using namespace dmabo;

namespace {

DualState dual(std::vector<double> lambda, std::vector<double> mu, double eta, double eps) {
  DualState d;
  d.lambda = Eigen::Map<Eigen::VectorXd>(lambda.data(), static_cast<Eigen::Index>(lambda.size()));
  d.mu = Eigen::Map<Eigen::VectorXd>(mu.data(), static_cast<Eigen::Index>(mu.size()));
  d.eta = eta;
  d.epsilon = eps;
  return d;
}

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index k = 0;
  for (double x : v) out[k++] = x;
  return out;
}

// The three-point instance with exact bounds.
const Grid kGrid = uniform_grid_1d(-1, 1, 3);
const std::vector<double> kF{1.0, 0.5, -1.0};
const std::vector<std::vector<double>> kG{{-1.0, 0.0, 2.0}};
const Eigen::MatrixXd kNoAffine(0, 1);

}  // namespace

TEST(PrimalUpdate, SmallMultiplierPicksOne) {
  // eta * lambda = 0.5: 1 - 0.5 = 0.5, 0.5, -1 + 1 = 0
  EXPECT_EQ(primal_update(kF, kG, kNoAffine, dual({0.5}, {}, 1.0, 0.0), kGrid), 2u);
  EXPECT_EQ(primal_update(kF, kG, kNoAffine, dual({50.0}, {}, 0.01, 0.0), kGrid), 2u);
}

TEST(PrimalUpdate, LargeMultiplierPicksMinusOne) {
  EXPECT_EQ(primal_update(kF, kG, kNoAffine, dual({1.0}, {}, 1.0, 0.0), kGrid), 0u);
}

TEST(PrimalUpdate, ZeroDualsMinimizeObjectiveBound) {
  EXPECT_EQ(primal_update(kF, kG, kNoAffine, dual({0.0}, {}, 1.0, 0.0), kGrid), 2u);
}

TEST(PrimalUpdate, TiesGoToLowestIndex) {
  const std::vector<double> f{0.0, -1.0, -1.0, -1.0};
  const std::vector<std::vector<double>> none;
  EXPECT_EQ(primal_update(f, none, kNoAffine, dual({}, {}, 1.0, 0.0), uniform_grid_1d(0, 1, 4)), 1u);
}

TEST(PrimalUpdate, AffinePriceShiftsChoice) {
  const Grid grid = uniform_grid_1d(0, 1, 11);
  std::vector<double> f;
  for (const Point& x : grid) f.push_back(-x[0]);
  const Eigen::MatrixXd A = Eigen::MatrixXd::Identity(1, 1);
  EXPECT_EQ(primal_update(f, {}, A, dual({}, {0.0}, 1.0, 0.0), grid), 10u);
  EXPECT_EQ(primal_update(f, {}, A, dual({}, {2.0}, 1.0, 0.0), grid), 0u);
}

TEST(PrimalUpdateProperty, ArgminMatchesBruteForce) {
  oracle::Gen gen(12);
  for (int trial = 0; trial < 200; ++trial) {
    const int size = gen.integer(1, 30);
    const int m = gen.integer(0, 3);
    const int l = gen.integer(0, 2);
    const Grid grid = uniform_grid_1d(-1, 1, static_cast<std::size_t>(size));
    std::vector<double> f(size);
    std::vector<std::vector<double>> g(m, std::vector<double>(size));
    for (auto& v : f) v = gen.uniform(-1, 1);
    for (auto& row : g) {
      for (auto& v : row) v = gen.uniform(-1, 1);
    }
    Eigen::MatrixXd A(l, 1);
    for (int r = 0; r < l; ++r) A(r, 0) = gen.uniform(-2, 2);
    DualState d;
    d.lambda = Eigen::VectorXd(m);
    for (int j = 0; j < m; ++j) d.lambda[j] = gen.uniform(0, 3);
    d.mu = Eigen::VectorXd(l);
    for (int k = 0; k < l; ++k) d.mu[k] = gen.uniform(-3, 3);
    d.eta = gen.uniform(0.01, 2);
    const std::size_t chosen = primal_update(f, g, A, d, grid);

    double best = std::numeric_limits<double>::infinity();
    std::size_t best_k = 0;
    for (int k = 0; k < size; ++k) {
      double v = f[k];
      for (int j = 0; j < m; ++j) v += d.eta * d.lambda[j] * g[j][k];
      for (int r = 0; r < l; ++r) v += d.eta * d.mu[r] * A(r, 0) * grid[k][0];
      if (v < best) {
        best = v;
        best_k = static_cast<std::size_t>(k);
      }
    }
    EXPECT_EQ(chosen, best_k);
  }
}

TEST(DualUpdate, Examples) {
  EXPECT_EQ(dual_update(dual({0.5}, {}, 1, 0.1), vec({-1.0}), Eigen::VectorXd(0)).lambda[0], 0.0);
  EXPECT_DOUBLE_EQ(dual_update(dual({}, {0.0}, 1, 0), Eigen::VectorXd(0), vec({0.3})).mu[0], 0.3);
  EXPECT_DOUBLE_EQ(dual_update(dual({0.0}, {}, 1, 0.05), vec({0.2}), Eigen::VectorXd(0)).lambda[0],
                   0.25);
  // mu is not clipped
  EXPECT_DOUBLE_EQ(dual_update(dual({}, {0.0}, 1, 0), Eigen::VectorXd(0), vec({-0.3})).mu[0], -0.3);
}

TEST(DualUpdate, DimensionMismatchThrows) {
  EXPECT_THROW(dual_update(dual({0.0}, {}, 1, 0), vec({1.0, 2.0}), Eigen::VectorXd(0)), InputError);
  EXPECT_THROW(dual_update(dual({}, {0.0}, 1, 0), Eigen::VectorXd(0), vec({1.0, 2.0})), InputError);
}

TEST(Rho, Examples) {
  Eigen::MatrixXd a(1, 2);
  a << 1, 1;
  EXPECT_DOUBLE_EQ(rho_from_affine(a, 0.5), 0.5);
  for (int l = 1; l <= 5; ++l) {
    EXPECT_NEAR(rho_from_affine(Eigen::MatrixXd::Identity(l, l), 1.0), 1.0 / std::sqrt(l), 1e-14);
  }
  Eigen::MatrixXd b(1, 2);
  b << 2, 0;
  EXPECT_DOUBLE_EQ(rho_from_affine(b, 1.0), 2.0);
  EXPECT_TRUE(std::isinf(rho_from_affine(Eigen::MatrixXd(0, 3), 1.0)));
}

TEST(Rho, SkipsDependentColumns) {
  Eigen::MatrixXd a(2, 3);
  a << 1, 2, 0,
       0, 0, 1;
  // columns 0 and 2 form the identity
  EXPECT_NEAR(rho_from_affine(a, 1.0), 1.0 / std::sqrt(2.0), 1e-14);
}

TEST(Rho, RankDeficientThrows) {
  Eigen::MatrixXd a(2, 2);
  a << 1, 1,
       2, 2;
  EXPECT_THROW(rho_from_affine(a, 1.0), InputError);
}

TEST(InfToTwoNorm, MatchesRandomSearchFromBelow) {
  oracle::Gen gen(6);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = gen.integer(1, 5);
    Eigen::MatrixXd M(n, n);
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < n; ++c) M(r, c) = gen.uniform(-2, 2);
    }
    const double exact = inf_to_two_norm(M);
    for (int s = 0; s < 200; ++s) {
      Eigen::VectorXd y(n);
      for (int c = 0; c < n; ++c) y[c] = gen.uniform(-1, 1);
      EXPECT_LE((M * y).norm(), exact + 1e-12);
    }
  }
}

TEST(Schedule, ConstantFormulas) {
  EXPECT_DOUBLE_EQ(schedule_h1(1, 1, 1, 1, 1), 50.0);
  EXPECT_DOUBLE_EQ(schedule_h2(1, 1, 1, 1, 1, 1), 52.0);
  const double bound = dual_potential_bound(50, 52, 1, 1, 1, 1);
  EXPECT_DOUBLE_EQ(bound, 107.0);
  EXPECT_NEAR(schedule_epsilon2(bound, 1), std::sqrt(214.0), 1e-12);
  EXPECT_NEAR(schedule_epsilon2(bound, 1), 14.629, 1e-3);
  EXPECT_EQ(schedule_h2(1, 1, std::numeric_limits<double>::infinity(), 1, 1, 1), 0.0);
}

TEST(Schedule, OscillationInstance) {
  const ProblemInstance problem = make_oscillation_example();
  ScheduleOptions opt;
  opt.horizon = 100;
  const ConstantSchedule s = compute_constants(problem, opt);
  EXPECT_DOUBLE_EQ(s.eta, 0.1);
  EXPECT_DOUBLE_EQ(s.c0, 1.2);
  EXPECT_DOUBLE_EQ(s.c[0], 2.4);
  EXPECT_EQ(s.B, 0.0);
  EXPECT_TRUE(std::isinf(s.rho));
  EXPECT_EQ(s.h2, 0.0);
  EXPECT_DOUBLE_EQ(s.h1, schedule_h1(1.2, 0.1, 1.0, 2.4 * 2.4, 0.0));
  EXPECT_DOUBLE_EQ(s.lambda1[0], std::sqrt(s.h1));
  EXPECT_DOUBLE_EQ(s.epsilon_limit(), 0.5);
  EXPECT_GE(s.epsilon1, s.epsilon2);
}

TEST(Schedule, PowerAllocationHasFiniteRhoAndExactB) {
  PowerAllocationSpec spec;
  spec.num_agents = 2;
  spec.budget = 1.0;
  spec.spacing = 0.25;
  const ProblemInstance problem = make_power_allocation(spec);
  ScheduleOptions opt;
  opt.horizon = 4;
  const ConstantSchedule s = compute_constants(problem, opt);
  EXPECT_TRUE(s.B_exact);
  EXPECT_DOUBLE_EQ(s.B, 1.0);  // |0 + 0 - 1| and |1 + 1 - 1|
  EXPECT_DOUBLE_EQ(s.rho, problem.tilde_rho);
  EXPECT_EQ(s.h1, 0.0);
  EXPECT_GT(s.h2, 0.0);
  EXPECT_EQ(s.lambda1.size(), 0);
  EXPECT_TRUE(std::isinf(s.epsilon_limit()));
}

TEST(Schedule, GammaEstimatesRaiseEpsilon1) {
  const ProblemInstance problem = make_oscillation_example();
  ScheduleOptions opt;
  opt.horizon = 50;
  const double base = compute_constants(problem, opt).epsilon1;
  opt.gamma_estimates = std::vector<std::vector<double>>{{4.0}};
  EXPECT_GT(compute_constants(problem, opt).epsilon1, base);
  EXPECT_THROW(compute_constants(problem, ScheduleOptions{.horizon = 0}), InputError);
}

TEST(Schedule, AffineInfeasibleGridThrows) {
  PowerAllocationSpec spec;
  spec.num_agents = 2;
  spec.budget = 1.0;
  spec.spacing = 0.5;
  ProblemInstance problem = make_power_allocation(spec);
  problem.b[0] = 0.75;
  EXPECT_THROW(compute_constants(problem, ScheduleOptions{.horizon = 4}), InstanceError);
}

TEST(Run, ZeroHorizonGivesEmptyTrace) {
  AlgoConfig config;
  config.horizon = 0;
  config.lambda1 = Lambda1Mode::manual(0.7);
  const RunTrace trace = run_dmabo(make_oscillation_example(), config, 1);
  EXPECT_EQ(trace.horizon(), 0u);
  ASSERT_TRUE(trace.initial_dual.has_value());
  EXPECT_DOUBLE_EQ(trace.initial_dual->lambda[0], 0.7);
}

TEST(Run, OscillationNeverSelectsOptimum) {
  AlgoConfig config;
  config.horizon = 3000;
  config.eta = 0.01;
  config.bounds = BoundsSource::kExact;
  const RunTrace trace = run_dmabo(make_oscillation_example(), config, 0);
  EXPECT_EQ(selection_fraction(trace, 0, 1), 0.0);
  const double at_one = selection_fraction(trace, 0, 2);
  EXPECT_GE(at_one, 0.28);
  EXPECT_LE(at_one, 0.39);
}

TEST(RunProperty, ShiftIdentityDualsNonnegativeAndDeterministic) {
  oracle::Gen gen(31);
  for (int trial = 0; trial < 4; ++trial) {
    PowerAllocationSpec spec;
    spec.num_agents = gen.integer(1, 3);
    spec.spacing = 0.1;
    spec.budget = 0.1 * gen.integer(0, 10 * spec.num_agents);
    spec.utility_seed = gen.seed();
    const ProblemInstance problem = make_power_allocation(spec);
    AlgoConfig config;
    config.horizon = 60;
    config.mu1 = gen.uniform(-1, 1);
    const std::uint64_t seed = gen.seed();
    const RunTrace trace = run_dmabo(problem, config, seed);
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(1);
    for (const auto& r : trace.rounds) {
      sum += r.affine_residual;
      EXPECT_TRUE((r.dual->lambda.array() >= 0.0).all());
    }
    EXPECT_LE((sum - (trace.rounds.back().dual->mu - trace.initial_dual->mu)).norm(), 1e-9);

    const RunTrace again = run_dmabo(problem, config, seed);
    for (std::size_t t = 0; t < trace.rounds.size(); ++t) {
      EXPECT_EQ(trace.rounds[t].choice, again.rounds[t].choice);
      EXPECT_EQ(trace.rounds[t].observed[0].y_f, again.rounds[t].observed[0].y_f);
    }
  }
}

TEST(RunProperty, GaussianProcessRunsKeepLambdaNonnegative) {
  const ProblemInstance problem = make_gp_instance(2, 2, KernelSpec::squared_exponential(0.2), 20, 3);
  AlgoConfig config;
  config.horizon = 40;
  config.epsilon = EpsilonMode::manual(0.05);
  const RunTrace trace = run_dmabo(problem, config, 9);
  ASSERT_EQ(trace.horizon(), 40u);
  for (const auto& r : trace.rounds) {
    EXPECT_TRUE((r.dual->lambda.array() >= 0.0).all());
    EXPECT_EQ(r.sum_lcb_g.size(), 2);
  }
  EXPECT_EQ(trace.info_gain.size(), 2u);
}

TEST(Run, TheoreticalScheduleIsRecorded) {
  AlgoConfig config;
  config.horizon = 20;
  config.lambda1 = Lambda1Mode::theoretical();
  config.epsilon = EpsilonMode::epsilon2();
  const RunTrace trace = run_dmabo(make_oscillation_example(), config, 0);
  ASSERT_TRUE(trace.schedule.has_value());
  EXPECT_DOUBLE_EQ(trace.initial_dual->lambda[0], trace.schedule->lambda1[0]);
  EXPECT_DOUBLE_EQ(trace.initial_dual->epsilon, trace.schedule->epsilon2);
}

TEST(Run, InvalidConfigThrows) {
  AlgoConfig config;
  config.horizon = -1;
  EXPECT_THROW(run_dmabo(make_oscillation_example(), config, 0), InputError);
  config.horizon = 5;
  config.model_noise = 0.0;
  EXPECT_THROW(run_dmabo(make_oscillation_example(), config, 0), InputError);
}
