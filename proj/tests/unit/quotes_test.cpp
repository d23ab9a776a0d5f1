#include <doctest.h>

#include <cmath>

#include "ltq/quotes.hpp"
#include "ltq/utility.hpp"
#include "support/oracles.hpp"
#include "support/scenarios.hpp"

using namespace ltq;
using namespace ltq::test;

TEST_CASE("threshold bounds on the paper parameterizations") {
  const ThresholdBounds base = threshold_bounds(base_scenario());
  CHECK(base.lower == 6);
  CHECK(base.upper == 10);
  CHECK(base.market_open);

  const ThresholdBounds no_comp = threshold_bounds(with_compensation(base_scenario(), 0.0));
  CHECK(no_comp.lower == 6);
  CHECK(no_comp.upper == 6);

  const ThresholdBounds full = threshold_bounds(with_compensation(base_scenario(), 8.0));
  CHECK(full.lower == 6);
  CHECK(full.upper == kUnboundedThreshold);

  Scenario infeasible = base_scenario();
  infeasible.service_rate = 2.0;
  infeasible.risk_aversion = 1.0;
  infeasible.compensation_rate = 5.0;
  CHECK_THROWS_AS(threshold_bounds(infeasible), infeasible_service_error);
}

TEST_CASE("provider quotes: infinite below the lower bound, roots above") {
  const Scenario s = base_scenario();
  for (int n = 0; n < 6; ++n) {
    CHECK(provider_quote(s, n).kind == QuoteKind::infinite);
  }
  for (int n = 6; n < 10; ++n) {
    const QuoteSolution q = provider_quote(s, n);
    CHECK(q.kind == QuoteKind::interior_root);
    CHECK(q.residual <= 1e-10);
  }
  CHECK(provider_quote(s, 10).kind == QuoteKind::infeasible);
  CHECK(provider_quote(s, 10).value == -1.0);
}

TEST_CASE("provider quotes match the r=1.3 column") {
  const Scenario s = with_risk(base_scenario(), 1.3);
  CHECK(std::abs(provider_quote(s, 5).value - 0.46) <= 0.01);
  CHECK(std::abs(provider_quote(s, 6).value - 0.26) <= 0.01);
  CHECK(std::abs(provider_quote(s, 7).value - 0.06) <= 0.01);
}

TEST_CASE("provider root brackets the sign change") {
  const Scenario s = base_scenario();
  const double root = provider_quote(s, 7).value;
  CHECK(expected_utility(s, 7, root - 1e-4).value > 0.0);
  CHECK(expected_utility(s, 7, root + 1e-4).value < 0.0);
}

TEST_CASE("provider quote ladder is nonincreasing with nonincreasing profits") {
  TestRng rng(41);
  for (int i = 0; i < 40; ++i) {
    const Scenario s = random_scenario(rng);
    const ThresholdBounds bounds = threshold_bounds(s);
    const int hi = bounds.upper_finite() ? bounds.upper : bounds.lower + 20;
    double prev_quote = kInfiniteQuote;
    double prev_profit = s.entrance_fee;
    for (int n = 0; n < hi; ++n) {
      const QuoteSolution q = provider_quote(s, n);
      REQUIRE(q.kind != QuoteKind::infeasible);
      const double d = q.kind == QuoteKind::infinite ? kInfiniteQuote : q.value;
      CHECK(d <= prev_quote + 1e-9);
      const double profit = s.entrance_fee - s.compensation_rate * expected_lateness(s, n, d);
      CHECK(profit <= prev_profit + 1e-9);
      prev_quote = d;
      prev_profit = profit;
    }
  }
}

TEST_CASE("social dynamic quote: a(0) value and the r=1.3 column") {
  const Scenario s = with_risk(base_scenario(), 1.3);
  const double v = s.tilted_rate_late_cost();
  for (int n : {0, 2, 5}) {
    const double expected_a0 =
        1.0 - std::exp(-s.risk_aversion * 5.0) * std::pow(s.service_rate / v, n + 1);
    CHECK(social_dynamic_rate_fn(s, n, 0.0) == doctest::Approx(expected_a0).epsilon(1e-12));
  }
  CHECK(std::abs(social_dynamic_quote(s, 0).value - 0.54) <= 0.01);
  CHECK(std::abs(social_dynamic_quote(s, 3).value - 0.48) <= 0.01);
  CHECK(std::abs(social_dynamic_quote(s, 6).value - 0.25) <= 0.01);
}

TEST_CASE("social dynamic quote maximizes the per-state social value") {
  const Scenario s = base_scenario();
  const int n = 4;  // below the lower bound: the provider quote is infinite
  const QuoteSolution sol = social_dynamic_quote(s, n);
  REQUIRE(provider_quote(s, n).kind == QuoteKind::infinite);
  // The marginal value is single-crossing, so a wide grid certifies the max.
  const double cap = 6.0;
  double best = -1e300, best_d = 0.0;
  for (double d = 0.0; d <= cap; d += 1e-4) {
    const double value = s.entrance_fee - s.compensation_rate * expected_lateness(s, n, d) +
                         expected_utility(s, n, d).value;
    if (value > best) {
      best = value;
      best_d = d;
    }
  }
  CHECK(std::abs(sol.value - best_d) < 1e-3);
}

TEST_CASE("social quote never exceeds the provider quote and leaves surplus") {
  TestRng rng(42);
  for (int i = 0; i < 40; ++i) {
    const Scenario s = random_scenario(rng);
    const ThresholdBounds bounds = threshold_bounds(s);
    const int hi = std::min(bounds.upper_finite() ? bounds.upper : bounds.lower + 12, 18);
    for (int n = 0; n < hi; ++n) {
      const QuoteSolution provider = provider_quote(s, n);
      const QuoteSolution social = social_dynamic_quote(s, n);
      const double dp = provider.kind == QuoteKind::infinite ? kInfiniteQuote : provider.value;
      CHECK(social.value <= dp + 1e-9);
      const double b_social = expected_utility(s, n, social.value).value;
      const double b_provider = expected_utility(s, n, dp).value;
      CHECK(b_social >= b_provider - 1e-9);
    }
  }
}

TEST_CASE("a and a_c are decreasing in the quote") {
  TestRng rng(43);
  for (int i = 0; i < 50; ++i) {
    const Scenario s = random_scenario(rng);
    const ThresholdBounds bounds = threshold_bounds(s);
    const int n = rng.uniform_int(0, 8);
    const double d = rng.uniform(0.0, 2.0);
    const double dd = rng.uniform(1e-3, 0.5);
    CHECK(social_dynamic_rate_fn(s, n, d + dd) <= social_dynamic_rate_fn(s, n, d) + 1e-11);
    const int n0 = std::max(1, bounds.lower);
    CHECK(social_single_rate_fn(s, n0, d + dd) <= social_single_rate_fn(s, n0, d) + 1e-11);
  }
}

TEST_CASE("single-quote intervals per the three threshold cases") {
  const Scenario s = base_scenario();
  const double d9 = provider_quote(s, 9).value;
  const double d6 = provider_quote(s, 6).value;

  const SingleQuoteInterval at_upper = single_quote_interval(s, 10);
  CHECK_FALSE(at_upper.lo_open);
  CHECK(at_upper.lo == 0.0);
  CHECK(at_upper.hi == doctest::Approx(d9));

  const SingleQuoteInterval at_lower = single_quote_interval(s, 6);
  CHECK(at_lower.lo_open);
  CHECK(at_lower.lo == doctest::Approx(d6));
  CHECK(at_lower.hi == kInfiniteQuote);

  const SingleQuoteInterval mid = single_quote_interval(s, 8);
  CHECK(mid.lo == doctest::Approx(provider_quote(s, 8).value));
  CHECK(mid.hi == doctest::Approx(provider_quote(s, 7).value));

  CHECK_THROWS_AS(single_quote_interval(s, 5), std::out_of_range);
  CHECK_THROWS_AS(single_quote_interval(s, 11), std::out_of_range);
}

TEST_CASE("interval endpoints decrease with the threshold") {
  const Scenario s = base_scenario();
  double prev_hi = kInfiniteQuote;
  for (int n0 = 7; n0 <= 10; ++n0) {
    const SingleQuoteInterval iv = single_quote_interval(s, n0);
    CHECK(iv.hi <= prev_hi + 1e-12);
    prev_hi = iv.hi;
  }
}

TEST_CASE("provider single quote: infinity at the lower bound, ladder above") {
  const Scenario s = base_scenario();
  CHECK(provider_single_quote(s, 6).kind == QuoteKind::infinite);
  CHECK(provider_single_quote(s, 8).value == doctest::Approx(provider_quote(s, 7).value));

  const Scenario s13 = with_risk(base_scenario(), 1.3);
  CHECK(std::abs(provider_single_quote(s13, 6).value - 0.46) <= 0.01);
}

TEST_CASE("social single quote: structural value at zero") {
  const Scenario s = base_scenario();
  for (int n0 : {7, 8, 9}) {
    const double beta = social_single_beta(s, n0);
    const double expected =
        1.0 - beta * std::exp(-s.risk_aversion * (s.service_value - s.entrance_fee));
    CHECK(social_single_rate_fn(s, n0, 0.0) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("social single quote matches a dense grid search at n0 = 8") {
  const Scenario s = base_scenario();
  const QuoteSolution sol = social_single_quote(s, 8);
  const SingleQuoteInterval iv = single_quote_interval(s, 8);
  double best = -1e300, best_d = 0.0;
  for (double d = iv.lo + 1e-6; d <= iv.hi; d += 1e-4) {
    double value = 0.0;
    const auto q = stationary_dist(8, s.arrival_rate, s.service_rate);
    for (int n = 0; n < 8; ++n) {
      value += q[n] * (s.entrance_fee - s.compensation_rate * expected_lateness(s, n, d) +
                       expected_utility(s, n, d).value);
    }
    if (value > best) {
      best = value;
      best_d = d;
    }
  }
  CHECK(std::abs(sol.value - best_d) < 1e-3);
}

TEST_CASE("social single quote at r=1.3 sits on the interval boundary") {
  const Scenario s = with_risk(base_scenario(), 1.3);
  const QuoteSolution sol = social_single_quote(s, 7);
  CHECK(sol.kind == QuoteKind::boundary);
  CHECK(std::abs(sol.value - 0.26) <= 0.01);
}

TEST_CASE("single quotes ordered and nonincreasing across thresholds") {
  TestRng rng(44);
  int checked = 0;
  for (int i = 0; i < 60 && checked < 25; ++i) {
    const Scenario s = random_scenario(rng);
    const ThresholdBounds bounds = threshold_bounds(s);
    if (!bounds.upper_finite() || bounds.upper <= bounds.lower) continue;
    ++checked;
    double prev_provider = kInfiniteQuote, prev_social = kInfiniteQuote;
    for (int n0 = bounds.lower; n0 <= bounds.upper; ++n0) {
      const QuoteSolution pc = provider_single_quote(s, n0);
      const QuoteSolution sc = social_single_quote(s, n0);
      const double dpc = pc.kind == QuoteKind::infinite ? kInfiniteQuote : pc.value;
      if (sc.kind == QuoteKind::infeasible) continue;
      CHECK(sc.value <= dpc + 1e-9);
      CHECK(dpc <= prev_provider + 1e-9);
      CHECK(sc.value <= prev_social + 1e-9);
      prev_provider = dpc;
      prev_social = sc.value;
    }
  }
  CHECK(checked >= 10);
}

TEST_CASE("interior roots satisfy the residual and bracket conditions") {
  TestRng rng(45);
  for (int i = 0; i < 30; ++i) {
    const Scenario s = random_scenario(rng);
    const ThresholdBounds bounds = threshold_bounds(s);
    const int hi = bounds.upper_finite() ? bounds.upper : bounds.lower + 10;
    for (int n = bounds.lower; n < hi; ++n) {
      const QuoteSolution q = provider_quote(s, n);
      if (q.kind != QuoteKind::interior_root) continue;
      CHECK(q.residual <= 1e-10);
      CHECK(q.bracket_lo <= q.value);
      CHECK(q.value <= q.bracket_hi);
    }
  }
}

TEST_CASE("enforcement quote makes the state balk") {
  const Scenario s = base_scenario();
  for (int n : {6, 8, 9, 10}) {
    const double d = enforcement_quote(s, n);
    CHECK(expected_utility(s, n, d).value < 0.0);
  }
  CHECK_THROWS_AS(enforcement_quote(s, 2), std::logic_error);  // joins at any quote
}
