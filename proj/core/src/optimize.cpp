#include "ltq/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ltq/erlang.hpp"
#include "ltq/queue_dist.hpp"
#include "ltq/utility.hpp"

namespace ltq {

namespace {

constexpr int kScanSafetyCap = 100000;

// Per-entrant profit at a quote the solver already knows induces joining.
double joining_profit(const Scenario& s, int state, double quote) {
  return s.entrance_fee - s.compensation_rate * expected_lateness(s, state, quote);
}

struct QuoteLadder {
  std::vector<QuoteSolution> provider;  // d~P_n, grown on demand
  const Scenario* s;

  const QuoteSolution& at(int n) {
    while (static_cast<int>(provider.size()) <= n) {
      provider.push_back(provider_quote(*s, static_cast<int>(provider.size())));
    }
    return provider[n];
  }

  // G_n at the provider quote; entrance fee when the quote is infinite,
  // zero when no quote induces joining.
  double profit_at(int n) {
    const QuoteSolution& q = at(n);
    if (q.kind == QuoteKind::infeasible) return 0.0;
    if (q.kind == QuoteKind::infinite) return s->entrance_fee;
    return joining_profit(*s, n, q.value);
  }
};

SolveResult empty_market_result(const Scenario& s, Problem problem, const ThresholdBounds& bounds) {
  SolveResult out;
  out.problem = problem;
  out.bounds = bounds;
  out.policy.threshold = 0;
  out.policy.regime = problem_regime(problem);
  out.policy.quotes = {0.0};
  out.objective = 0.0;
  out.note = "empty market: no quote induces an arrival to join an empty system";
  const UtilityEval u = expected_utility(s, 0, 0.0);
  out.per_state.push_back({0, 0.0, u.value, 0.0, 1.0});
  return out;
}

void fill_diagnostics(const Scenario& s, SolveResult* result) {
  const QuotationPolicy& pol = result->policy;
  result->per_state.clear();
  if (pol.threshold == 0) {
    const double d = pol.quote_at(0);
    result->per_state.push_back({0, d, expected_utility(s, 0, d).value, 0.0, 1.0});
    return;
  }
  const auto q = stationary_dist(pol.threshold, s.arrival_rate, s.service_rate);
  for (int n = 0; n <= pol.threshold; ++n) {
    const double d = pol.quote_at(n);
    const double b = expected_utility(s, n, d).value;
    const double g = (n < pol.threshold && b >= 0.0) ? joining_profit(s, n, d) : 0.0;
    result->per_state.push_back({n, d, b, g, q[n]});
  }
}

// First-stage scan shared by the two Prop-style dynamic solvers: returns
// max(lower, min(first n0 with marginal A(n0) < 0, upper)). `value_at(n)`
// is the per-entrant value at the state-n optimal quote.
template <class ValueFn>
int first_negative_marginal(const Scenario& s, const ThresholdBounds& bounds, ValueFn&& value_at,
                            std::vector<std::pair<int, double>>* trace) {
  const double rho = s.utilization();
  const int hard_cap = bounds.upper_finite() ? bounds.upper : kScanSafetyCap;

  double pow_rho = 1.0;       // rho^n0
  double joined_mass = 0.0;   // sum_{n<n0} rho^n * value_n
  double state_mass = 0.0;    // sum_{n<=n0} rho^n
  int candidate = hard_cap;
  for (int n0 = 0; n0 <= hard_cap; ++n0) {
    state_mass += pow_rho;
    const double value_n0 = value_at(n0);
    const double marginal = value_n0 * state_mass - rho * joined_mass;
    if (trace && n0 >= bounds.lower) {
      trace->push_back({n0, s.arrival_rate * joined_mass / state_mass});
    }
    if (marginal < 0.0) {
      candidate = n0;
      break;
    }
    joined_mass += pow_rho * value_n0;
    pow_rho *= rho;
  }
  return std::max(bounds.lower, std::min(candidate, bounds.upper));
}

double objective_for(const Scenario& s, Problem problem, const QuotationPolicy& policy) {
  return problem_is_social(problem) ? eval_social_rate(s, policy) : eval_profit_rate(s, policy);
}

SolveResult finish(const Scenario& s, Problem problem, const ThresholdBounds& bounds,
                   QuotationPolicy policy, std::vector<std::pair<int, double>> trace,
                   std::string note = {}) {
  SolveResult out;
  out.problem = problem;
  out.bounds = bounds;
  out.policy = std::move(policy);
  out.objective = objective_for(s, problem, out.policy);
  out.search_trace = std::move(trace);
  out.note = std::move(note);
  fill_diagnostics(s, &out);
  return out;
}

}  // namespace

const char* problem_name(Problem p) {
  switch (p) {
    case Problem::provider_dynamic: return "provider-dynamic";
    case Problem::provider_single: return "provider-single";
    case Problem::social_dynamic: return "social-dynamic";
    case Problem::social_single: return "social-single";
  }
  return "?";
}

Regime problem_regime(Problem p) {
  return (p == Problem::provider_dynamic || p == Problem::social_dynamic) ? Regime::dynamic
                                                                          : Regime::single;
}

bool problem_is_social(Problem p) {
  return p == Problem::social_dynamic || p == Problem::social_single;
}

double QuotationPolicy::quote_at(int state) const {
  if (quotes.empty()) throw std::logic_error("policy has no quotes");
  if (regime == Regime::single) return quotes.front();
  if (state < 0 || state >= static_cast<int>(quotes.size())) {
    throw std::out_of_range("policy quote index");
  }
  return quotes[state];
}

void validate_policy(const Scenario& s, const QuotationPolicy& policy) {
  s.validate();
  if (policy.threshold < 0) throw invalid_policy_error("threshold must be >= 0");
  const size_t want = policy.regime == Regime::single ? 1 : policy.threshold + 1;
  if (policy.quotes.size() < want) throw invalid_policy_error("policy quote vector too short");
  for (int n = 0; n < policy.threshold; ++n) {
    const double d = policy.quote_at(n);
    if (!(d >= 0.0)) throw invalid_policy_error("quotes must be nonnegative");
    if (expected_utility(s, n, d).value < 0.0) {
      throw invalid_policy_error("state " + std::to_string(n) +
                                 " balks under its quote but lies below the threshold");
    }
  }
  const double d_balk = policy.quote_at(policy.threshold);
  if (!(d_balk >= 0.0)) throw invalid_policy_error("quotes must be nonnegative");
  if (expected_utility(s, policy.threshold, d_balk).value >= 0.0) {
    throw invalid_policy_error("threshold state joins under its quote");
  }
}

double eval_profit_rate(const Scenario& s, const QuotationPolicy& policy) {
  validate_policy(s, policy);
  if (policy.threshold == 0) return 0.0;
  const auto q = stationary_dist(policy.threshold, s.arrival_rate, s.service_rate);
  double rate = 0.0;
  for (int n = 0; n < policy.threshold; ++n) {
    rate += q[n] * joining_profit(s, n, policy.quote_at(n));
  }
  return s.arrival_rate * rate;
}

double eval_social_rate(const Scenario& s, const QuotationPolicy& policy) {
  validate_policy(s, policy);
  if (policy.threshold == 0) return 0.0;
  const auto q = stationary_dist(policy.threshold, s.arrival_rate, s.service_rate);
  double rate = 0.0;
  for (int n = 0; n < policy.threshold; ++n) {
    const double d = policy.quote_at(n);
    rate += q[n] * (joining_profit(s, n, d) + expected_utility(s, n, d).value);
  }
  return s.arrival_rate * rate;
}

SolveResult solve_provider_dynamic(const Scenario& s) {
  s.validate();
  const ThresholdBounds bounds = threshold_bounds(s);
  if (!bounds.market_open) return empty_market_result(s, Problem::provider_dynamic, bounds);

  QuoteLadder ladder{{}, &s};
  std::vector<std::pair<int, double>> trace;
  const int n_opt = first_negative_marginal(
      s, bounds, [&](int n) { return ladder.profit_at(n); }, &trace);

  QuotationPolicy policy;
  policy.threshold = n_opt;
  policy.regime = Regime::dynamic;
  for (int n = 0; n < n_opt; ++n) {
    const QuoteSolution& q = ladder.at(n);
    policy.quotes.push_back(q.kind == QuoteKind::infinite ? kInfiniteQuote : q.value);
  }
  policy.quotes.push_back(enforcement_quote(s, n_opt));
  return finish(s, Problem::provider_dynamic, bounds, std::move(policy), std::move(trace));
}

SolveResult solve_social_dynamic(const Scenario& s) {
  s.validate();
  const ThresholdBounds bounds = threshold_bounds(s);
  if (!bounds.market_open) return empty_market_result(s, Problem::social_dynamic, bounds);

  std::vector<QuoteSolution> social;
  std::vector<double> social_value;  // (G_n + B_n) at the social quote
  auto value_at = [&](int n) {
    while (static_cast<int>(social.size()) <= n) {
      const int k = static_cast<int>(social.size());
      // States at or beyond the upper bound never join; their per-entrant
      // contribution to the first-stage marginal is zero.
      if (bounds.upper_finite() && k >= bounds.upper) {
        social.push_back({-1.0, QuoteKind::infeasible, 0, 0, 0});
        social_value.push_back(0.0);
      } else {
        QuoteSolution sol = social_dynamic_quote(s, k);
        double value = 0.0;
        if (sol.kind != QuoteKind::infeasible) {
          value = joining_profit(s, k, sol.value) + expected_utility(s, k, sol.value).value;
        }
        social.push_back(sol);
        social_value.push_back(value);
      }
    }
    return social_value[n];
  };

  std::vector<std::pair<int, double>> trace;
  const int n_opt = first_negative_marginal(s, bounds, value_at, &trace);

  QuotationPolicy policy;
  policy.threshold = n_opt;
  policy.regime = Regime::dynamic;
  value_at(std::max(0, n_opt - 1));
  for (int n = 0; n < n_opt; ++n) policy.quotes.push_back(social[n].value);
  policy.quotes.push_back(enforcement_quote(s, n_opt));
  return finish(s, Problem::social_dynamic, bounds, std::move(policy), std::move(trace));
}

namespace {

// Shared single-quote exhaustive search over thresholds in [lower, upper].
template <class CandidateFn>
SolveResult exhaustive_single(const Scenario& s, Problem problem, CandidateFn&& candidate_at) {
  const ThresholdBounds bounds = threshold_bounds(s);
  if (!bounds.market_open) return empty_market_result(s, problem, bounds);

  const int hi =
      bounds.upper_finite() ? bounds.upper : bounds.lower + kUnboundedSearchSpan;
  bool have_best = false;
  double best_objective = 0.0;
  QuotationPolicy best_policy;
  std::string best_note;
  std::vector<std::pair<int, double>> trace;

  double prev_objective = 0.0;
  bool have_prev = false;
  int stall = 0;
  for (int n0 = bounds.lower; n0 <= hi; ++n0) {
    QuotationPolicy policy;
    std::string note;
    if (!candidate_at(n0, &policy, &note)) continue;
    double objective;
    try {
      objective = objective_for(s, problem, policy);
    } catch (const invalid_policy_error&) {
      continue;  // degenerate tie (e.g. quote = inf cannot enforce the threshold)
    }
    trace.push_back({n0, objective});
    if (!have_best || objective > best_objective) {
      have_best = true;
      best_objective = objective;
      best_policy = std::move(policy);
      best_note = std::move(note);
    }
    if (!bounds.upper_finite()) {
      if (have_prev && std::abs(objective - prev_objective) < 1e-12 && ++stall >= 10) break;
      if (have_prev && std::abs(objective - prev_objective) >= 1e-12) stall = 0;
      prev_objective = objective;
      have_prev = true;
    }
  }
  if (!have_best) {
    SolveResult out = empty_market_result(s, problem, bounds);
    out.note = "no threshold in [lower, upper] admits an attainable single quote";
    return out;
  }
  return finish(s, problem, bounds, std::move(best_policy), std::move(trace),
                std::move(best_note));
}

}  // namespace

SolveResult solve_provider_single(const Scenario& s) {
  s.validate();
  return exhaustive_single(
      s, Problem::provider_single, [&](int n0, QuotationPolicy* policy, std::string* note) {
        const QuoteSolution sol = provider_single_quote(s, n0);
        policy->threshold = n0;
        policy->regime = Regime::single;
        policy->quotes = {sol.kind == QuoteKind::infinite ? kInfiniteQuote : sol.value};
        if (sol.kind == QuoteKind::infinite) {
          *note = "single quote inf at the lower bound: compensation never paid";
        }
        return true;
      });
}

SolveResult solve_social_single(const Scenario& s) {
  s.validate();
  return exhaustive_single(
      s, Problem::social_single, [&](int n0, QuotationPolicy* policy, std::string* note) {
        const QuoteSolution sol = social_single_quote(s, n0);
        if (sol.kind == QuoteKind::infeasible) return false;
        double quote = sol.value;
        if (sol.kind == QuoteKind::epsilon_only) {
          // Supremum sits at the open lower end of the feasible interval;
          // publish the canonical quote just inside it. The enforced policy
          // trails the supremum by a vanishing margin, and such thresholds
          // do carry the global optimum for some parameters.
          quote = enforcement_bump(sol.value);
          if (sol.bracket_hi != kInfiniteQuote) {
            quote = std::min(quote, sol.value + 0.5 * (sol.bracket_hi - sol.value));
          }
          *note = "optimum at this threshold is a supremum; published an "
                  "epsilon-optimal quote just inside the interval";
        }
        policy->threshold = n0;
        policy->regime = Regime::single;
        policy->quotes = {quote};
        return true;
      });
}

SolveResult solve(const Scenario& s, Problem problem) {
  switch (problem) {
    case Problem::provider_dynamic: return solve_provider_dynamic(s);
    case Problem::provider_single: return solve_provider_single(s);
    case Problem::social_dynamic: return solve_social_dynamic(s);
    case Problem::social_single: return solve_social_single(s);
  }
  throw std::logic_error("unknown problem");
}

SolveResult risk_neutral_solve(const Scenario& s, Problem problem) {
  if (!s.risk_neutral()) {
    throw std::invalid_argument("risk_neutral_solve: scenario has nonzero risk aversion");
  }
  return solve(s, problem);
}

}  // namespace ltq
