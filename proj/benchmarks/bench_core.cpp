#include <memory>
#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "dmabo/algorithm.hpp"
#include "dmabo/dual.hpp"
#include "dmabo/gp_posterior.hpp"
#include "dmabo/problems.hpp"

using namespace dmabo;

namespace {

std::vector<double> random_values(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist;
  std::vector<double> out(n);
  for (double& v : out) v = dist(rng);
  return out;
}

GPPosterior posterior_with(std::size_t observations, const Grid& grid, bool track) {
  GPPosterior post(KernelSpec::squared_exponential(0.2), 0.0004);
  if (track) post = std::move(post).tracking(std::make_shared<const Grid>(grid));
  const auto ys = random_values(observations, 1);
  for (std::size_t t = 0; t < observations; ++t) {
    post = std::move(post).with_observation(grid[(t * 7) % grid.size()], ys[t]);
  }
  return post;
}

}  // namespace

static void BM_GpAppend(benchmark::State& state) {
  const Grid grid = uniform_grid_1d(-1, 1, 50);
  const auto n = static_cast<std::size_t>(state.range(0));
  const GPPosterior base = posterior_with(n, grid, false);
  for (auto _ : state) {
    benchmark::DoNotOptimize(base.with_observation(grid[3], 0.5));
  }
}
BENCHMARK(BM_GpAppend)->Arg(50)->Arg(200)->Arg(400);

static void BM_GpAppendTracked(benchmark::State& state) {
  const Grid grid = uniform_grid_1d(-1, 1, 50);
  const auto n = static_cast<std::size_t>(state.range(0));
  const GPPosterior base = posterior_with(n, grid, true);
  for (auto _ : state) {
    benchmark::DoNotOptimize(base.with_observation(grid[3], 0.5));
  }
}
BENCHMARK(BM_GpAppendTracked)->Arg(50)->Arg(200)->Arg(400);

static void BM_GpPredictGrid(benchmark::State& state) {
  const Grid grid = uniform_grid_1d(-1, 1, 50);
  const GPPosterior post = posterior_with(static_cast<std::size_t>(state.range(0)), grid, false);
  for (auto _ : state) benchmark::DoNotOptimize(post.predict(grid));
}
BENCHMARK(BM_GpPredictGrid)->Arg(50)->Arg(200);

static void BM_PrimalUpdate(benchmark::State& state) {
  const auto size = static_cast<std::size_t>(state.range(0));
  const Grid grid = uniform_grid_1d(-1, 1, size);
  const auto f = random_values(size, 2);
  const std::vector<std::vector<double>> g{random_values(size, 3), random_values(size, 4)};
  DualState dual;
  dual.lambda = Eigen::VectorXd::Constant(2, 0.7);
  dual.mu = Eigen::VectorXd::Constant(1, -0.3);
  dual.eta = 0.1;
  const Eigen::MatrixXd affine = Eigen::MatrixXd::Ones(1, 1);
  for (auto _ : state) benchmark::DoNotOptimize(primal_update(f, g, affine, dual, grid));
}
BENCHMARK(BM_PrimalUpdate)->Arg(50)->Arg(1000);

static void BM_DmaboRun(benchmark::State& state) {
  const ProblemInstance problem =
      make_gp_instance(3, 2, KernelSpec::squared_exponential(0.2), 50, 0);
  AlgoConfig config;
  config.horizon = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_dmabo(problem, config, 0));
}
BENCHMARK(BM_DmaboRun)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

static void BM_ReferenceSolver(benchmark::State& state) {
  PowerAllocationSpec spec;
  spec.num_agents = static_cast<int>(state.range(0));
  const ProblemInstance problem = make_power_allocation(spec);
  for (auto _ : state) benchmark::DoNotOptimize(solve_reference(problem));
}
BENCHMARK(BM_ReferenceSolver)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
