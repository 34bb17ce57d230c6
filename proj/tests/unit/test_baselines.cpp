#include <cmath>
#include <limits>
#include <memory>
#include <vector>

#include <gtest/gtest.h>

#include "dmabo/algorithm.hpp"
#include "dmabo/baselines.hpp"
#include "dmabo/error.hpp"
#include "dmabo/problems.hpp"
#include "oracles.hpp"

using namespace dmabo;

namespace {

AgentModel model_with(const Grid& grid, int m, const std::vector<std::pair<std::size_t, Observation>>& data,
                      double noise = 0.0004) {
  AgentModel model(KernelSpec::squared_exponential(0.3), noise, m, std::make_shared<const Grid>(grid));
  for (const auto& [k, obs] : data) model.observe(grid[k], obs);
  return model;
}

}  // namespace

TEST(ExpectedImprovement, Examples) {
  EXPECT_DOUBLE_EQ(expected_improvement({0.2, 0.0}, 1.0), 0.8);
  EXPECT_DOUBLE_EQ(expected_improvement({1.2, 0.0}, 1.0), 0.0);
  EXPECT_NEAR(expected_improvement({1.0, 1.0}, 1.0), 1.0 / std::sqrt(2 * M_PI), 1e-15);
  EXPECT_NEAR(expected_improvement({1.0, 1.0}, 1.0), 0.39894, 1e-5);
  EXPECT_LT(expected_improvement({10.0, 0.01}, 0.0), 1e-12);
  // tiny sigma converges to the deterministic improvement
  EXPECT_NEAR(expected_improvement({0.2, 1e-20}, 1.0), 0.8, 1e-9);
}

TEST(ExpectedImprovement, AgreesWithNumericalIntegration) {
  oracle::Gen gen(1);
  for (int trial = 0; trial < 50; ++trial) {
    const double mu = gen.uniform(-2, 2), sd = gen.uniform(0.05, 1.5), inc = gen.uniform(-2, 2);
    double integral = 0.0;
    const int steps = 20000;
    const double lo = mu - 10 * sd, hi = mu + 10 * sd, h = (hi - lo) / steps;
    for (int s = 0; s < steps; ++s) {
      const double y = lo + (s + 0.5) * h;
      const double z = (y - mu) / sd;
      integral += std::max(inc - y, 0.0) * std::exp(-0.5 * z * z) / (sd * std::sqrt(2 * M_PI)) * h;
    }
    EXPECT_NEAR(expected_improvement({mu, sd * sd}, inc), integral, 1e-6);
  }
}

TEST(FeasibilityProbability, MedianAndSteps) {
  EXPECT_DOUBLE_EQ(feasibility_probability({0.0, 1.0}, 0.0), 0.5);
  EXPECT_EQ(feasibility_probability({-1.0, 0.0}, 0.0), 1.0);
  EXPECT_EQ(feasibility_probability({1.0, 0.0}, 0.0), 0.0);
  EXPECT_EQ(feasibility_probability({0.0, 0.0}, 0.0), 0.5);
}

TEST(Cei, CertainFeasibleReducesToEi) {
  const Grid grid = uniform_grid_1d(-1, 1, 21);
  std::vector<std::pair<std::size_t, Observation>> data;
  for (std::size_t k = 0; k < 21; k += 4) {
    data.push_back({k, Observation{std::sin(3.0 * grid[k][0]), {-50.0}}});
  }
  const AgentModel constrained = model_with(grid, 1, data);
  const std::vector<double> thresholds{0.0};
  const auto cei = cei_acquisition(constrained, 0.1, thresholds);
  std::vector<double> ei;
  for (std::size_t k = 0; k < 21; ++k) {
    ei.push_back(expected_improvement(constrained.output(0).grid_prediction(k), 0.1));
  }
  // every grid point is within 0.2 of a constraint observation at -50
  for (std::size_t k = 0; k < ei.size(); ++k) EXPECT_NEAR(cei[k], ei[k], 1e-12);
  std::size_t best = 0;
  for (std::size_t k = 1; k < ei.size(); ++k) {
    if (ei[k] > ei[best]) best = k;
  }
  EXPECT_EQ(cei_step(constrained, 0.1, thresholds), best);
}

TEST(Cei, NoConstraintsEqualsPlainEi) {
  const Grid grid = uniform_grid_1d(-1, 1, 15);
  const AgentModel model = model_with(grid, 0, {{3, Observation{0.4, {}}}, {11, Observation{-0.2, {}}}});
  const auto acq = cei_acquisition(model, -0.2, std::vector<double>{});
  for (std::size_t k = 0; k < grid.size(); ++k) {
    EXPECT_DOUBLE_EQ(acq[k], expected_improvement(model.output(0).grid_prediction(k), -0.2));
  }
}

TEST(Cei, CertainInfeasibleFallsBackToLowestIndex) {
  const Grid grid = uniform_grid_1d(-1, 1, 5);
  const AgentModel model = model_with(grid, 1, {});
  // prior sigma 1: threshold -1e9 drives every probability to 0
  const std::vector<double> thresholds{-1e9};
  for (double v : cei_acquisition(model, 0.0, thresholds)) EXPECT_EQ(v, 0.0);
  EXPECT_EQ(cei_step(model, 0.0, thresholds), 0u);
}

TEST(Cei, MedianMultiplier) {
  const Grid grid = uniform_grid_1d(-1, 1, 5);
  const AgentModel model = model_with(grid, 1, {});
  const std::vector<double> thresholds{0.0};
  const auto acq = cei_acquisition(model, std::nullopt, thresholds);
  for (double v : acq) EXPECT_DOUBLE_EQ(v, 0.5);
  EXPECT_THROW(cei_acquisition(model, std::nullopt, std::vector<double>{}), InputError);
}

TEST(Penalty, ZeroWeightIsEi) {
  const Grid grid = uniform_grid_1d(0, 1, 11);
  const AgentModel model = model_with(grid, 0, {{2, Observation{-0.5, {}}}, {9, Observation{0.3, {}}}});
  EXPECT_EQ(penalty_step(model, -0.5, std::vector<double>{}, Point::Constant(1, 0.9), 0.0),
            cei_step(model, -0.5, std::vector<double>{}));
}

TEST(Penalty, HugeWeightSnapsToTarget) {
  const Grid grid = uniform_grid_1d(0, 1, 11);
  const AgentModel model = model_with(grid, 0, {{2, Observation{-0.5, {}}}});
  EXPECT_EQ(penalty_step(model, -0.5, std::vector<double>{}, Point::Constant(1, 0.73), 1e9), 7u);
  EXPECT_EQ(penalty_step(model, -0.5, std::vector<double>{}, Point::Constant(1, 0.73),
                         std::numeric_limits<double>::infinity()),
            7u);
  EXPECT_THROW(penalty_step(model, -0.5, std::vector<double>{}, Point::Zero(1), -1.0), InputError);
}

TEST(Coordination, UniformCorrectionAndClip) {
  PowerAllocationSpec spec;
  spec.num_agents = 3;
  spec.budget = 1.5;
  spec.spacing = 0.1;
  const ProblemInstance p = make_power_allocation(spec);
  const auto t = coordination_targets(p, {Point::Constant(1, 0.8), Point::Constant(1, 0.5),
                                          Point::Constant(1, 0.5)});
  EXPECT_NEAR(t[0][0], 0.7, 1e-12);
  EXPECT_NEAR(t[1][0], 0.4, 1e-12);
  const auto clipped = coordination_targets(p, {Point::Constant(1, 0.0), Point::Constant(1, 0.0),
                                                Point::Constant(1, 1.0)});
  // 1 + 0.5/3 exceeds p_max
  EXPECT_DOUBLE_EQ(clipped[2][0], 1.0);
  EXPECT_NEAR(clipped[0][0], 0.5 / 3.0, 1e-12);
}

TEST(Runs, ShareOracleStreamsWithDmabo) {
  const ProblemInstance p = make_gp_instance(2, 1, KernelSpec::squared_exponential(0.2), 11, 4);
  BaselineConfig base;
  base.horizon = 5;
  const RunTrace cei = run_dcei(p, base, 21);
  const RunTrace pen = run_penalty(p, base, 21);
  // both start at the midpoint and consume the same first draws
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_EQ(cei.rounds[0].choice[i], 5u);
    EXPECT_EQ(cei.rounds[0].observed[i].y_f, pen.rounds[0].observed[i].y_f);
    EXPECT_EQ(cei.rounds[0].observed[i].y_g, pen.rounds[0].observed[i].y_g);
  }
  // the first draw of each stream is the same whichever method asks
  AlgoConfig config;
  config.horizon = 1;
  const RunTrace dm = run_dmabo(p, config, 21);
  for (std::size_t i = 0; i < 2; ++i) {
    const std::size_t k = dm.rounds[0].choice[i];
    const double noise_dm = dm.rounds[0].observed[i].y_f - p.agents[i].objective[k];
    const double noise_cei = cei.rounds[0].observed[i].y_f - p.agents[i].objective[5];
    EXPECT_NEAR(noise_dm, noise_cei, 1e-12);
  }
}

TEST(Runs, TracesAreTaggedAndDualFree) {
  PowerAllocationSpec spec;
  const ProblemInstance p = make_power_allocation(spec);
  BaselineConfig base;
  base.horizon = 10;
  const RunTrace cei = run_dcei(p, base, 1);
  const RunTrace pen = run_penalty(p, base, 1);
  EXPECT_EQ(cei.method, "dcei");
  EXPECT_EQ(pen.method, "penalty");
  EXPECT_EQ(pen.horizon(), 10u);
  EXPECT_FALSE(pen.rounds[3].dual.has_value());
  const RunTrace again = run_penalty(p, base, 1);
  for (std::size_t t = 0; t < 10; ++t) EXPECT_EQ(pen.rounds[t].choice, again.rounds[t].choice);
}
