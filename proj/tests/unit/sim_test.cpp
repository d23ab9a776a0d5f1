#include <doctest.h>

#include <cmath>

#include "ltq/optimize.hpp"
#include "ltq/queue_dist.hpp"
#include "ltq/sim.hpp"
#include "ltq/utility.hpp"
#include "support/scenarios.hpp"

using namespace ltq;
using namespace ltq::test;

namespace {

SimConfig quick_config(std::uint64_t seed) {
  SimConfig cfg;
  cfg.seed = seed;
  cfg.replications = 10;
  cfg.horizon = {SimHorizon::Unit::events, 1e5};
  return cfg;
}

}  // namespace

TEST_CASE("no-compensation forced threshold: CI covers the analytic profit rate") {
  const Scenario s = with_compensation(base_scenario(), 0.0);
  const SolveResult res = solve_provider_dynamic(s);
  const SimEstimate est = simulate(s, res.policy, quick_config(101));
  CHECK(est.profit_rate.covers(res.objective));
  CHECK(est.profit_rate.half_width < 1.0);
}

TEST_CASE("provider-dynamic optimal policy: CI covers the paper value") {
  const SolveResult res = solve_provider_dynamic(base_scenario());
  SimConfig cfg = quick_config(7);
  cfg.replications = 20;
  cfg.horizon.value = 2e5;
  const SimEstimate est = simulate(base_scenario(), res.policy, cfg);
  CHECK(est.profit_rate.covers(94.91));
  CHECK(est.social_rate.covers(eval_social_rate(base_scenario(), res.policy)));
}

TEST_CASE("occupancy matches the stationary distribution within 3 sigma") {
  const SolveResult res = solve_social_dynamic(base_scenario());
  const SimEstimate est = simulate(base_scenario(), res.policy, quick_config(11));
  const auto q = stationary_dist(res.policy.threshold, base_scenario().arrival_rate,
                                 base_scenario().service_rate);
  for (int n = 0; n <= res.policy.threshold; ++n) {
    const double sigma = est.occupancy_ci[n].half_width / 1.96;
    CHECK(std::abs(est.occupancy_ci[n].mean - q[n]) <= 3.0 * sigma + 1e-4);
  }
  double total = 0.0;
  for (double x : est.occupancy) total += x;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("lateness paid per entrant matches l * L_n within 3 sigma-ish") {
  const Scenario s = base_scenario();
  const SolveResult res = solve_provider_dynamic(s);
  const SimEstimate est = simulate(s, res.policy, quick_config(13));
  for (int n = 0; n < res.policy.threshold; ++n) {
    const double expect = expected_lateness(s, n, res.policy.quote_at(n));
    if (est.completions_by_state[n] < 500) continue;
    const double tol =
        3.0 * std::max(0.02 * (expect + 0.01), 0.3 / std::sqrt(double(est.completions_by_state[n])));
    CHECK(std::abs(est.mean_lateness_paid[n] - expect) <= tol);
  }
}

TEST_CASE("vanishing arrivals leave the system empty") {
  Scenario s = base_scenario();
  s.arrival_rate = 1e-3;
  const SolveResult res = solve_provider_dynamic(s);
  SimConfig cfg = quick_config(3);
  cfg.replications = 2;
  cfg.horizon = {SimHorizon::Unit::events, 2e4};
  const SimEstimate est = simulate(s, res.policy, cfg);
  CHECK(est.occupancy[0] > 0.99);
}

TEST_CASE("equal seeds are bit-identical; different seeds are not") {
  const SolveResult res = solve_provider_single(base_scenario());
  const SimEstimate a = simulate(base_scenario(), res.policy, quick_config(42));
  const SimEstimate b = simulate(base_scenario(), res.policy, quick_config(42));
  CHECK(a.profit_rate.mean == b.profit_rate.mean);
  CHECK(a.profit_rate.half_width == b.profit_rate.half_width);
  CHECK(a.social_rate.mean == b.social_rate.mean);
  CHECK(a.occupancy == b.occupancy);
  const SimEstimate c = simulate(base_scenario(), res.policy, quick_config(43));
  CHECK(a.profit_rate.mean != c.profit_rate.mean);
}

TEST_CASE("time-clocked horizon agrees with the analytic rate") {
  const SolveResult res = solve_provider_dynamic(base_scenario());
  SimConfig cfg = quick_config(17);
  cfg.horizon = {SimHorizon::Unit::time, 5e3};
  const SimEstimate est = simulate(base_scenario(), res.policy, cfg);
  CHECK(est.profit_rate.covers(res.objective));
}

TEST_CASE("state utility estimate covers the closed form") {
  const Scenario s = base_scenario();
  QuotationPolicy policy;
  policy.regime = Regime::dynamic;
  policy.threshold = 9;
  for (int n = 0; n < 9; ++n) policy.quotes.push_back(0.5);
  policy.quotes.push_back(0.0);

  SimConfig cfg = quick_config(23);
  cfg.horizon.value = 4e5;
  const Estimate est = estimate_state_utility(s, policy, cfg, 3);
  const double exact = expected_utility(s, 3, 0.5).value;
  CHECK(est.covers(exact));
  CHECK(est.half_width < 0.05);
}

TEST_CASE("state utility at the provider quote is indifferent") {
  const Scenario s = base_scenario();
  const SolveResult res = solve_provider_dynamic(s);
  SimConfig cfg = quick_config(29);
  cfg.horizon.value = 6e5;
  const Estimate est = estimate_state_utility(s, res.policy, cfg, 7);
  CHECK(est.covers(0.0));
}

TEST_CASE("empty-system utility under near-neutral risk") {
  Scenario s = with_risk(base_scenario(), 1e-6);
  QuotationPolicy policy{1, Regime::dynamic, {kInfiniteQuote, 0.0}};
  SimConfig cfg = quick_config(31);
  cfg.horizon.value = 4e5;
  const Estimate est = estimate_state_utility(s, policy, cfg, 0);
  const double expect = s.service_value - s.entrance_fee - s.delay_cost_rate / s.service_rate;
  CHECK(std::abs(est.mean - expect) < 0.05);
}

TEST_CASE("config validation") {
  SimConfig cfg;
  cfg.replications = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = SimConfig{};
  cfg.warmup_fraction = 1.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = SimConfig{};
  cfg.batch_count = 1;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("realized per-state utilities center on the closed form") {
  const Scenario s = base_scenario();
  const SolveResult res = solve_social_dynamic(s);
  SimConfig cfg = quick_config(37);
  cfg.replications = 20;
  cfg.horizon.value = 2e5;
  const SimEstimate est = simulate(s, res.policy, cfg);
  for (int n = 0; n < res.policy.threshold; ++n) {
    if (est.completions_by_state[n] < 2000) continue;
    const double exact = expected_utility(s, n, res.policy.quote_at(n)).value;
    const double hw = est.state_utility[n].half_width;
    CHECK(std::abs(est.state_utility[n].mean - exact) <= 3.0 * hw / 1.96 + 1e-3);
  }
}
