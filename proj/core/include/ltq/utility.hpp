#pragma once

#include "ltq/scenario.hpp"

namespace ltq {

enum class EvalMethod { closed_form, quadrature_fallback };

/// Extended-real expected utility; -infinity is a legitimate value
/// (infeasible service, or an uncompensated quote with mu <= r c).
struct UtilityEval {
  double value;
  EvalMethod method;
};

/// Expected CARA utility of a customer who joins seeing `state` customers
/// under lead-time quote `quote` (kInfiniteQuote means no compensation).
///
/// The closed form is
///   B_n(d) = [1 - e^{-r(R-p)} ( (mu/(mu-rc))^{n+1} (1 - K1) + (mu/v)^{n+1} K2 )] / r
/// with K1 the signed tail sum at rate mu-rc and K2 = e^{rld} F_bar_{n+1,v}(d).
/// Near the mu = rc pole, or when the signed continuation loses precision,
/// the defining two-piece integral is evaluated by adaptive quadrature.
/// At r = 0 the exact risk-neutral form R - p - c(n+1)/mu + l L_n(d) is used.
UtilityEval expected_utility(const Scenario& s, int state, double quote);

/// L_n(d) = E(X_n - d)^+ with X_n ~ Erlang(state+1, mu); zero at d = infinity.
double expected_lateness(const Scenario& s, int state, double quote);

/// Provider's expected net profit from an arrival seeing `state`:
/// p - l L_n(d) when the customer joins (B_n(d) >= 0), zero otherwise.
double entrant_profit(const Scenario& s, int state, double quote);

/// Risk-neutral balking thresholds for a fixed entrance fee:
/// floor(mu (R-p)/c) and floor(mu (R-p)/(c-l)); the second is
/// kUnboundedThreshold under full compensation l = c.
struct NaorThresholds {
  int lower;
  int upper;
};

NaorThresholds naor_thresholds(const Scenario& s);

}  // namespace ltq
