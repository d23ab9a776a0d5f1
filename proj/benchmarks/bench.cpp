#include <benchmark/benchmark.h>

#include "ltq/experiments.hpp"
#include "ltq/optimize.hpp"
#include "ltq/quotes.hpp"
#include "ltq/sim.hpp"
#include "ltq/utility.hpp"

namespace {

ltq::Scenario base() { return {15.0, 10.0, 8.0, 3.0, 0.5, 10.0, 12.0}; }

void BM_ExpectedUtility(benchmark::State& state) {
  const ltq::Scenario s = base();
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(ltq::expected_utility(s, n, 0.4).value);
  }
}
BENCHMARK(BM_ExpectedUtility)->Arg(2)->Arg(8)->Arg(32);

void BM_ExpectedUtilityQuadraturePath(benchmark::State& state) {
  ltq::Scenario s = base();
  s.risk_aversion = 1.5;  // mu = r c: pole band, quadrature route
  for (auto _ : state) {
    benchmark::DoNotOptimize(ltq::expected_utility(s, 5, 0.4).value);
  }
}
BENCHMARK(BM_ExpectedUtilityQuadraturePath);

void BM_ProviderQuote(benchmark::State& state) {
  const ltq::Scenario s = base();
  for (auto _ : state) {
    benchmark::DoNotOptimize(ltq::provider_quote(s, 8).value);
  }
}
BENCHMARK(BM_ProviderQuote);

void BM_SocialSingleQuote(benchmark::State& state) {
  const ltq::Scenario s = base();
  for (auto _ : state) {
    benchmark::DoNotOptimize(ltq::social_single_quote(s, 8).value);
  }
}
BENCHMARK(BM_SocialSingleQuote);

void BM_Solve(benchmark::State& state) {
  const ltq::Scenario s = base();
  const auto problem = static_cast<ltq::Problem>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(ltq::solve(s, problem).objective);
  }
}
BENCHMARK(BM_Solve)->DenseRange(0, 3);

void BM_SweepRow(benchmark::State& state) {
  ltq::SweepSpec spec;
  spec.base = base();
  spec.axis = ltq::SweepAxis::entrance_fee;
  spec.grid = {10.0};
  spec.threads = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ltq::run_sweep(spec).rows.size());
  }
}
BENCHMARK(BM_SweepRow);

void BM_SimulateMillionEvents(benchmark::State& state) {
  const ltq::Scenario s = base();
  const ltq::SolveResult res = ltq::solve_provider_dynamic(s);
  ltq::SimConfig cfg;
  cfg.replications = 1;
  cfg.horizon = {ltq::SimHorizon::Unit::events, 1e6};
  for (auto _ : state) {
    cfg.seed++;
    benchmark::DoNotOptimize(ltq::simulate(s, res.policy, cfg).profit_rate.mean);
  }
  state.SetItemsProcessed(state.iterations() * 1000000);
}
BENCHMARK(BM_SimulateMillionEvents);

}  // namespace

BENCHMARK_MAIN();
