#include "ltq/quotes.hpp"

#include <cmath>
#include <stdexcept>

#include "ltq/erlang.hpp"
#include "ltq/queue_dist.hpp"
#include "ltq/utility.hpp"

namespace ltq {

namespace {

constexpr double kBracketCap = 1e12;

void require_feasible(const Scenario& s) {
  if (!s.feasible_service()) {
    throw infeasible_service_error("service rate does not cover the risk-adjusted late cost");
  }
}

// Bisection for a continuous decreasing f with f(lo) >= 0 > f(hi).
// Returns the last point where f >= 0, so callers keep the weak-preference
// tie convention (a customer exactly indifferent joins).
template <class F>
QuoteSolution bisect_decreasing(F&& f, double lo, double hi) {
  const double lo0 = lo, hi0 = hi;
  while (hi - lo > 1e-15 * (1.0 + std::abs(hi))) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (f(mid) >= 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return {lo, QuoteKind::interior_root, lo0, hi0, std::abs(f(lo))};
}

// Doubles hi from `start` until f(hi) < 0.
template <class F>
double find_negative(F&& f, double start) {
  double hi = start;
  while (f(hi) >= 0.0) {
    hi *= 2.0;
    if (hi > kBracketCap) throw std::logic_error("quote bracket exceeded cap");
  }
  return hi;
}

double utility_at(const Scenario& s, int state, double quote) {
  return expected_utility(s, state, quote).value;
}

// First-order-in-r optimality condition for the social per-state quote as
// r -> 0 (the risk-neutral objective itself is flat in the quote).
double risk_neutral_social_rate_fn(const Scenario& s, int state, double d) {
  const int n = state;
  const double mu = s.service_rate;
  const double cl = s.delay_cost_rate - s.compensation_rate;
  const double gain = s.service_value - s.entrance_fee;
  const double tail = erlang_tail({n + 1, mu}, d);
  if (tail <= 0.0) return -kInfiniteQuote;
  const double pn = erlang_pdf({n + 1, mu}, d) / mu;  // e^{-mu d}(mu d)^n / n!
  return gain - s.compensation_rate * d - (n + 1) * cl / mu - cl * d * pn / tail;
}

}  // namespace

ThresholdBounds threshold_bounds(const Scenario& s) {
  require_feasible(s);
  if (s.risk_neutral()) {
    const NaorThresholds nt = naor_thresholds(s);
    return {nt.lower, nt.upper, nt.upper >= 1};
  }
  const double scaled_gain = s.risk_aversion * (s.service_value - s.entrance_fee);
  const double a = s.tilted_rate_full_cost();
  const double v = s.tilted_rate_late_cost();
  const double mu = s.service_rate;

  int lower = 0;
  if (a > 0.0) {
    lower = static_cast<int>(std::floor(scaled_gain / std::log(mu / a) + 1e-9));
  }
  int upper = kUnboundedThreshold;
  if (s.compensation_rate < s.delay_cost_rate) {
    upper = static_cast<int>(std::floor(scaled_gain / std::log(mu / v) + 1e-9));
  }
  return {lower, upper, upper >= 1};
}

QuoteSolution provider_quote(const Scenario& s, int state) {
  require_feasible(s);
  if (state < 0) throw std::invalid_argument("provider_quote: state must be >= 0");

  const double at_zero = utility_at(s, state, 0.0);
  if (at_zero < 0.0) return {-1.0, QuoteKind::infeasible, 0.0, 0.0, at_zero};
  if (utility_at(s, state, kInfiniteQuote) >= 0.0) {
    return {kInfiniteQuote, QuoteKind::infinite, 0.0, kInfiniteQuote, 0.0};
  }
  auto f = [&](double d) { return utility_at(s, state, d); };
  const double hi = find_negative(f, 1.0);
  return bisect_decreasing(f, 0.0, hi);
}

double social_dynamic_rate_fn(const Scenario& s, int state, double d) {
  if (s.risk_neutral()) return risk_neutral_social_rate_fn(s, state, d);
  const int n = state;
  const double mu = s.service_rate;
  const double v = s.tilted_rate_late_cost();
  const double r = s.risk_aversion;
  const double shift = std::exp((n + 1) * std::log(mu / v) -
                                r * (s.service_value - s.entrance_fee));
  const double tail_v = erlang_tail({n + 1, v}, d);
  if (tail_v <= 0.0) return -shift;
  const double tail_mu = erlang_tail({n + 1, mu}, d);
  return (tail_mu / tail_v) * std::exp(-r * s.compensation_rate * d) - shift;
}

QuoteSolution social_dynamic_quote(const Scenario& s, int state) {
  require_feasible(s);
  const QuoteSolution provider = provider_quote(s, state);
  if (provider.kind == QuoteKind::infeasible) return provider;

  auto f = [&](double d) { return social_dynamic_rate_fn(s, state, d); };
  if (provider.finite() || provider.kind == QuoteKind::infinite) {
    const double cap = provider.kind == QuoteKind::infinite ? kInfiniteQuote : provider.value;
    if (cap != kInfiniteQuote && f(cap) >= 0.0) {
      return {cap, QuoteKind::boundary, 0.0, cap, std::abs(f(cap))};
    }
    if (f(0.0) < 0.0) {
      // Only possible when B_state(0) == 0 exactly; the root is at zero.
      return {0.0, QuoteKind::boundary, 0.0, cap == kInfiniteQuote ? 0.0 : cap, std::abs(f(0.0))};
    }
    const double hi = cap == kInfiniteQuote ? find_negative(f, 1.0) : cap;
    return bisect_decreasing(f, 0.0, hi);
  }
  return provider;
}

double social_single_beta(const Scenario& s, int threshold) {
  const double mu = s.service_rate;
  const double v = s.tilted_rate_late_cost();
  const double lam = s.arrival_rate;
  return (mu / v) * geom_sum(lam / v, threshold) / geom_sum(lam / mu, threshold);
}

double social_single_rate_fn(const Scenario& s, int threshold, double d) {
  const double mu = s.service_rate;
  const double v = s.tilted_rate_late_cost();
  const double r = s.risk_aversion;
  const double shift = social_single_beta(s, threshold) *
                       std::exp(-r * (s.service_value - s.entrance_fee));
  const FiniteQueueSojourn qv{threshold, s.arrival_rate, v};
  const double tail_v = marginal_sojourn_tail(qv, d);
  if (tail_v <= 0.0) return -shift;
  const FiniteQueueSojourn qmu{threshold, s.arrival_rate, mu};
  const double tail_mu = marginal_sojourn_tail(qmu, d);
  return (tail_mu / tail_v) * std::exp(-r * s.compensation_rate * d) - shift;
}

SingleQuoteInterval single_quote_interval(const Scenario& s, int threshold) {
  const ThresholdBounds bounds = threshold_bounds(s);
  if (threshold < bounds.lower || (bounds.upper_finite() && threshold > bounds.upper)) {
    throw std::out_of_range("single_quote_interval: threshold outside [lower, upper]");
  }
  SingleQuoteInterval out;
  if (bounds.upper_finite() && threshold == bounds.upper) {
    out.lo = 0.0;
    out.lo_open = false;
  } else {
    const QuoteSolution at = provider_quote(s, threshold);
    out.lo = at.kind == QuoteKind::infeasible ? 0.0 : at.value;
    out.lo_open = at.kind != QuoteKind::infeasible;
  }
  if (threshold == bounds.lower) {
    out.hi = kInfiniteQuote;
  } else {
    const QuoteSolution above = provider_quote(s, threshold - 1);
    out.hi = above.kind == QuoteKind::infinite ? kInfiniteQuote : above.value;
  }
  return out;
}

QuoteSolution provider_single_quote(const Scenario& s, int threshold) {
  const ThresholdBounds bounds = threshold_bounds(s);
  if (threshold < bounds.lower || (bounds.upper_finite() && threshold > bounds.upper)) {
    throw std::out_of_range("provider_single_quote: threshold outside [lower, upper]");
  }
  if (threshold == bounds.lower) {
    return {kInfiniteQuote, QuoteKind::infinite, 0.0, kInfiniteQuote, 0.0};
  }
  QuoteSolution sol = provider_quote(s, threshold - 1);
  sol.kind = sol.kind == QuoteKind::infinite ? QuoteKind::infinite : QuoteKind::boundary;
  return sol;
}

QuoteSolution social_single_quote(const Scenario& s, int threshold) {
  const SingleQuoteInterval iv = single_quote_interval(s, threshold);

  if (threshold == 0) {
    // No joining states: the rate is identically zero, any enforcing quote
    // is optimal.
    if (!iv.lo_open) return {0.0, QuoteKind::boundary, iv.lo, iv.hi, 0.0};
    if (iv.lo == kInfiniteQuote) return {-1.0, QuoteKind::infeasible, iv.lo, iv.hi, 0.0};
    return {enforcement_bump(iv.lo), QuoteKind::boundary, iv.lo, iv.hi, 0.0};
  }

  if (s.risk_neutral()) {
    // The risk-neutral social rate depends on the policy only through the
    // threshold, so any feasible quote is optimal; publish the canonical
    // enforcement value just inside the interval (0 when closed below).
    if (!iv.lo_open) return {0.0, QuoteKind::boundary, iv.lo, iv.hi, 0.0};
    if (iv.lo == kInfiniteQuote) {
      return {-1.0, QuoteKind::infeasible, iv.lo, iv.hi, 0.0};
    }
    double d = enforcement_bump(iv.lo);
    if (iv.hi != kInfiniteQuote) d = std::min(d, 0.5 * (iv.lo + iv.hi));
    return {d, QuoteKind::boundary, iv.lo, iv.hi, 0.0};
  }

  auto f = [&](double d) { return social_single_rate_fn(s, threshold, d); };

  if (iv.hi != kInfiniteQuote && f(iv.hi) >= 0.0) {
    return {iv.hi, QuoteKind::boundary, iv.lo, iv.hi, std::abs(f(iv.hi))};
  }
  const double lo_probe = iv.lo_open ? iv.lo : 0.0;
  if (lo_probe == kInfiniteQuote) return {-1.0, QuoteKind::infeasible, iv.lo, iv.hi, 0.0};
  const double at_lo = f(lo_probe);
  if (at_lo <= 0.0) {
    if (!iv.lo_open) {
      // Closed interval at the upper threshold: the optimum is quote 0.
      return {0.0, QuoteKind::boundary, iv.lo, iv.hi, std::abs(at_lo)};
    }
    return {iv.lo, QuoteKind::epsilon_only, iv.lo, iv.hi, std::abs(at_lo)};
  }
  const double hi = iv.hi == kInfiniteQuote ? find_negative(f, std::max(1.0, 2.0 * lo_probe)) : iv.hi;
  QuoteSolution sol = bisect_decreasing(f, lo_probe, hi);
  if (iv.lo_open && sol.value <= iv.lo) {
    // Root collapsed onto the open endpoint.
    return {iv.lo, QuoteKind::epsilon_only, iv.lo, iv.hi, std::abs(f(iv.lo))};
  }
  return sol;
}

double enforcement_bump(double provider_quote_value) {
  return provider_quote_value * (1.0 + 1e-6) + 1e-9;
}

double enforcement_quote(const Scenario& s, int state) {
  const QuoteSolution sol = provider_quote(s, state);
  if (sol.kind == QuoteKind::infeasible) return 0.0;
  if (sol.kind == QuoteKind::infinite) {
    throw std::logic_error("enforcement_quote: state joins under every quote");
  }
  return enforcement_bump(sol.value);
}

}  // namespace ltq
