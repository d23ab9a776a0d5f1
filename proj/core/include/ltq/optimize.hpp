#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ltq/quotes.hpp"
#include "ltq/scenario.hpp"

namespace ltq {

enum class Problem { provider_dynamic, provider_single, social_dynamic, social_single };
enum class Regime { dynamic, single };

const char* problem_name(Problem p);
Regime problem_regime(Problem p);
bool problem_is_social(Problem p);

/// A balking threshold plus the quotes that enforce it: per-state quotes
/// d_0..d_n0 for the dynamic regime, one common quote for the single
/// regime. Valid policies satisfy B_n(d_n) >= 0 for n < n0 and
/// B_n0(d_n0) < 0.
struct QuotationPolicy {
  int threshold = 0;
  Regime regime = Regime::dynamic;
  std::vector<double> quotes;  // size threshold+1 (dynamic) or 1 (single)

  double quote_at(int state) const;
};

struct StateDiagnostic {
  int state;
  double quote;
  double utility;    // B_n at the policy quote
  double profit;     // G_n at the policy quote (0 at the balking state)
  double occupancy;  // q(n; n0)
};

struct SolveResult {
  QuotationPolicy policy;
  double objective = 0.0;
  Problem problem = Problem::provider_dynamic;
  std::vector<StateDiagnostic> per_state;
  ThresholdBounds bounds;
  std::vector<std::pair<int, double>> search_trace;  // (threshold, objective)
  std::string note;
};

/// Throws invalid_policy_error when the join/balk constraints fail.
void validate_policy(const Scenario& s, const QuotationPolicy& policy);

/// lambda * sum_{n < n0} q(n; n0) G_n(d_n). Validates the policy first.
double eval_profit_rate(const Scenario& s, const QuotationPolicy& policy);

/// Same with G_n + B_n per entrant.
double eval_social_rate(const Scenario& s, const QuotationPolicy& policy);

SolveResult solve(const Scenario& s, Problem problem);
SolveResult solve_provider_dynamic(const Scenario& s);
SolveResult solve_provider_single(const Scenario& s);
SolveResult solve_social_dynamic(const Scenario& s);
SolveResult solve_social_single(const Scenario& s);

/// Entry point for r = 0 scenarios; throws std::invalid_argument when the
/// scenario carries a nonzero risk aversion.
SolveResult risk_neutral_solve(const Scenario& s, Problem problem);

// Exhaustive-search horizon when the upper threshold bound is unbounded
// (full compensation): capped at lower + 200 with a stall test.
inline constexpr int kUnboundedSearchSpan = 200;

}  // namespace ltq
