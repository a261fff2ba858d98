#include <benchmark/benchmark.h>

#include <cmath>

#include "deterrence/equilibrium.hpp"
#include "deterrence/sweeps.hpp"
#include "deterrence/verification.hpp"

using namespace deterrence;

namespace {

GameParams small_costs(int n) {
  GameParams p;
  p.n = n;
  p.b = 0.1;
  p.c = 0.02;
  p.delta = 0.999;
  p.alpha = 0.5;
  p.pi_star = 0.95;
  p.L = 1000.0;
  return p;
}

// Independent offenses and a linear rule, for sizes the solvers do not cover.
StrategyProfile synthetic(int n) {
  auto p = small_costs(n);
  std::vector<double> marg(n, 0.3), q(n + 1);
  for (int m = 0; m <= n; ++m) q[m] = 0.01 * m;
  return StrategyProfile::symmetric(p, PrincipalStrategy::from(OffenseDistribution::independent(marg)),
                                    AgentCutoffs{-0.3, -0.4}, ConvictionRule::symmetric(q),
                                    Adjudication::Distinct);
}

}  // namespace

static void BM_SolveSingleAgent(benchmark::State& state) {
  GameParams p;
  p.b = 1.0;
  p.c = 10.0;
  p.L = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(solve_single_agent(p).q);
}
BENCHMARK(BM_SolveSingleAgent)->Arg(10)->Arg(1000)->Arg(100000);

static void BM_SolveAppOneType(benchmark::State& state) {
  auto p = small_costs(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(solve_app_one_type(p).q);
}
BENCHMARK(BM_SolveAppOneType)->DenseRange(2, 3);

static void BM_SolveTwoType(benchmark::State& state) {
  auto p = small_costs(2);
  p.b = 1.0;
  p.c = 0.001;
  p.alpha = 0.05;
  p.pi_o = 0.5;
  p.L = 1e5;
  for (auto _ : state) benchmark::DoNotOptimize(solve_app_two_type(p).q);
}
BENCHMARK(BM_SolveTwoType)->Unit(benchmark::kMillisecond);

static void BM_SolveDpp(benchmark::State& state) {
  auto p = small_costs(static_cast<int>(state.range(0)));
  p.b = 3.0;
  p.c = 0.001;
  p.alpha = 0.01;
  for (auto _ : state) benchmark::DoNotOptimize(solve_dpp(p).q);
}
BENCHMARK(BM_SolveDpp)->Arg(2)->Arg(8);

static void BM_ComplementsInterval(benchmark::State& state) {
  GameParams p;
  p.n = 2;
  p.b = 1.0;
  p.c = 10.0;
  for (auto _ : state) benchmark::DoNotOptimize(complements_L_interval(p).L_low);
}
BENCHMARK(BM_ComplementsInterval);

static void BM_Residuals(benchmark::State& state) {
  auto prof = synthetic(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(best_response_residuals(prof).max_gap());
}
BENCHMARK(BM_Residuals)->DenseRange(2, 8, 2);

static void BM_ConvictionKernel(benchmark::State& state) {
  auto prof = synthetic(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(conviction_given_theta(prof));
}
BENCHMARK(BM_ConvictionKernel)->DenseRange(2, 12, 2);

static void BM_MonteCarlo(benchmark::State& state) {
  auto eq = solve_app_one_type(small_costs(2));
  const auto draws = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(monte_carlo(eq.profile, draws, 42).max_abs_z());
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MonteCarlo)->Arg(100'000)->Arg(1'000'000)->UseRealTime()->Unit(benchmark::kMillisecond);

static void BM_SweepL(benchmark::State& state) {
  auto p = small_costs(2);
  std::vector<double> grid;
  for (int k = 0; k < state.range(0); ++k) grid.push_back(100.0 * std::pow(10.0, 3.0 * k / state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(sweep_L(p, grid, SweepRegime::AppOneType).size());
}
BENCHMARK(BM_SweepL)->Arg(16)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
