#pragma once

#include "ltq/scenario.hpp"

namespace ltq {

enum class QuoteKind {
  interior_root,  // unique zero of the optimality function inside the bracket
  boundary,       // optimum sits on an attainable interval endpoint
  infinite,       // quote = infinity (no compensation ever paid)
  infeasible,     // no quote induces joining at this state (value -1)
  epsilon_only,   // sup approached at an open endpoint, not attained
};

struct QuoteSolution {
  double value = 0.0;
  QuoteKind kind = QuoteKind::interior_root;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  double residual = 0.0;  // |f| at the returned root, where meaningful

  bool finite() const { return kind == QuoteKind::interior_root || kind == QuoteKind::boundary; }
};

/// Universal bounds on any policy's balking threshold plus the market
/// participation verdict (upper >= 1, i.e. someone joins an empty system).
struct ThresholdBounds {
  int lower = 0;
  int upper = 0;  // kUnboundedThreshold under full compensation
  bool market_open = false;

  bool upper_finite() const { return upper != kUnboundedThreshold; }
};

/// Throws infeasible_service_error when mu <= r (c - l);
/// at r = 0 returns the risk-neutral thresholds.
ThresholdBounds threshold_bounds(const Scenario& s);

/// Largest quote a customer seeing `state` will accept:
/// sup{d >= 0 : B_n(d) >= 0}. Infinite when the limit utility stays
/// nonnegative, infeasible when even d = 0 is rejected.
QuoteSolution provider_quote(const Scenario& s, int state);

/// Socially optimal per-state quote: the provider quote if the marginal
/// social value is still nonnegative there, otherwise the unique zero of
/// the marginal-value function below it. At r = 0 solves the limiting
/// first-order condition (the objective itself is flat in d).
QuoteSolution social_dynamic_quote(const Scenario& s, int state);

/// Marginal-value functions driving the social roots; exposed for tests.
double social_dynamic_rate_fn(const Scenario& s, int state, double quote);
double social_single_rate_fn(const Scenario& s, int threshold, double quote);

/// Coefficient multiplying e^{-r(R-p)} in the single-quote marginal-value
/// function (ratio of tilted joining-state weights).
double social_single_beta(const Scenario& s, int threshold);

/// Feasible single quotes that induce the given balking threshold.
struct SingleQuoteInterval {
  double lo = 0.0;
  bool lo_open = true;  // closed only at threshold = upper bound (lo = 0)
  double hi = 0.0;      // closed; kInfiniteQuote at threshold = lower bound
};

SingleQuoteInterval single_quote_interval(const Scenario& s, int threshold);

/// Profit-optimal single quote for a fixed threshold: infinity at the
/// lower bound, else the provider quote one state below.
QuoteSolution provider_single_quote(const Scenario& s, int threshold);

/// Socially optimal single quote for a fixed threshold per the interval
/// case analysis; `epsilon_only` marks thresholds whose supremum is not
/// attained (excluded from the first-stage search).
QuoteSolution social_single_quote(const Scenario& s, int threshold);

/// Canonical published quote that makes `state` balk: just above the
/// provider quote (any strictly larger value works).
double enforcement_quote(const Scenario& s, int state);
double enforcement_bump(double provider_quote_value);

}  // namespace ltq
