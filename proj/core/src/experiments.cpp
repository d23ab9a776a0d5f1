#include "ltq/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>
#include <thread>

#include "ltq/utility.hpp"

namespace ltq {

namespace {

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("LTQ_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

// Index-parallel map with deterministic placement.
template <class Fn>
void parallel_for(int count, int threads, Fn&& fn) {
  threads = std::min(threads, count);
  if (threads <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t]() {
      for (int i = t; i < count; i += threads) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

std::string format_quote(double d) {
  if (d == kInfiniteQuote) return "inf";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", d);
  return buf;
}

std::string summarize_quotes(const QuotationPolicy& policy) {
  if (policy.regime == Regime::single) return format_quote(policy.quotes.front());
  if (policy.threshold == 0) return "-";
  std::string out = "d0=" + format_quote(policy.quote_at(0));
  if (policy.threshold > 1) {
    out += ";d" + std::to_string(policy.threshold - 1) + "=" +
           format_quote(policy.quote_at(policy.threshold - 1));
  }
  return out;
}

bool market_open_no_throw(const Scenario& s) {
  try {
    return threshold_bounds(s).market_open;
  } catch (const infeasible_service_error&) {
    return false;
  }
}

ProblemOutcome solve_outcome(const Scenario& s, Problem problem, bool with_sim,
                             const SimConfig& sim_cfg) {
  ProblemOutcome out;
  out.problem = problem;
  try {
    const SolveResult res = solve(s, problem);
    out.threshold = res.policy.threshold;
    out.objective = res.objective;
    out.quote_summary = res.policy.threshold == 0 ? "-" : summarize_quotes(res.policy);
    out.empty_market = res.policy.threshold == 0;
    if (with_sim && !out.empty_market) {
      const SimEstimate est = simulate(s, res.policy, sim_cfg);
      out.sim_profit = est.profit_rate;
      out.sim_social = est.social_rate;
    }
  } catch (const infeasible_service_error&) {
    out.infeasible_service = true;
    out.quote_summary = "-";
  }
  return out;
}

}  // namespace

const char* sweep_axis_name(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::entrance_fee: return "p";
    case SweepAxis::compensation_rate: return "l";
    case SweepAxis::risk_aversion: return "r";
    case SweepAxis::service_rate: return "mu";
    case SweepAxis::arrival_rate: return "lambda";
  }
  return "?";
}

std::optional<SweepAxis> sweep_axis_from_name(const std::string& name) {
  if (name == "p") return SweepAxis::entrance_fee;
  if (name == "l") return SweepAxis::compensation_rate;
  if (name == "r") return SweepAxis::risk_aversion;
  if (name == "mu") return SweepAxis::service_rate;
  if (name == "lambda") return SweepAxis::arrival_rate;
  return std::nullopt;
}

Scenario with_axis_value(const Scenario& base, SweepAxis axis, double value) {
  Scenario s = base;
  switch (axis) {
    case SweepAxis::entrance_fee: s.entrance_fee = value; break;
    case SweepAxis::compensation_rate: s.compensation_rate = value; break;
    case SweepAxis::risk_aversion: s.risk_aversion = value; break;
    case SweepAxis::service_rate: s.service_rate = value; break;
    case SweepAxis::arrival_rate: s.arrival_rate = value; break;
  }
  return s;
}

void SweepSpec::validate() const {
  if (grid.empty()) throw std::invalid_argument("sweep: grid must be nonempty");
  for (size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) {
      throw std::invalid_argument("sweep: grid must be strictly increasing");
    }
  }
  if (problems.empty()) throw std::invalid_argument("sweep: no problems selected");
  for (double g : grid) with_axis_value(base, axis, g).validate();
}

SweepResult run_sweep(const SweepSpec& spec) {
  spec.validate();
  SweepResult result;
  result.axis = spec.axis;
  result.problems = spec.problems;
  result.rows.resize(spec.grid.size());

  const int threads = resolve_threads(spec.threads);
  parallel_for(static_cast<int>(spec.grid.size()), threads, [&](int i) {
    const Scenario s = with_axis_value(spec.base, spec.axis, spec.grid[i]);
    SweepRow row;
    row.axis_value = spec.grid[i];
    try {
      const ThresholdBounds bounds = threshold_bounds(s);
      row.lower = bounds.lower;
      row.upper = bounds.upper;
    } catch (const infeasible_service_error&) {
      row.infeasible_service = true;
    }
    for (Problem p : spec.problems) {
      row.outcomes.push_back(solve_outcome(s, p, spec.with_simulation, spec.sim));
    }
    result.rows[i] = std::move(row);
  });
  return result;
}

QuoteTable quote_table(const Scenario& s) {
  s.validate();
  if (!s.risk_neutral() && !s.feasible_service()) {
    throw infeasible_service_error("quote_table: infeasible service");
  }
  QuoteTable table;
  table.bounds = threshold_bounds(s);

  const std::array<Problem, 4> order = {Problem::provider_dynamic, Problem::provider_single,
                                        Problem::social_dynamic, Problem::social_single};
  std::array<SolveResult, 4> solved;
  for (int j = 0; j < 4; ++j) {
    solved[j] = solve(s, order[j]);
    table.thresholds[j] = solved[j].policy.threshold;
  }

  int row_max = *std::max_element(table.thresholds.begin(), table.thresholds.end());
  if (table.bounds.upper_finite()) row_max = std::max(row_max, table.bounds.upper);
  for (int n = 0; n <= row_max; ++n) table.states.push_back(n);

  for (int j = 0; j < 4; ++j) {
    const QuotationPolicy& pol = solved[j].policy;
    auto& col = table.columns[j];
    col.resize(row_max + 1);
    for (int n = 0; n <= row_max; ++n) {
      if (n >= pol.threshold) {
        col[n] = {QuoteCell::Tag::balk, 0.0};
      } else {
        const double d = pol.quote_at(n);
        col[n] = d == kInfiniteQuote ? QuoteCell{QuoteCell::Tag::infinite, 0.0}
                                     : QuoteCell{QuoteCell::Tag::finite, d};
      }
    }
  }
  return table;
}

std::vector<RiskCurvePoint> risk_aversion_curves(const Scenario& base,
                                                 const std::vector<double>& r_grid) {
  base.validate();
  std::vector<RiskCurvePoint> out(r_grid.size());
  parallel_for(static_cast<int>(r_grid.size()), resolve_threads(0), [&](int i) {
    RiskCurvePoint pt;
    pt.r = r_grid[i];
    const Scenario s = with_axis_value(base, SweepAxis::risk_aversion, pt.r);
    Scenario no_comp = s;
    no_comp.compensation_rate = 0.0;

    auto objective = [](const Scenario& sc, Problem p) {
      try {
        return solve(sc, p).objective;
      } catch (const infeasible_service_error&) {
        return 0.0;
      }
    };
    pt.provider_dynamic = objective(s, Problem::provider_dynamic);
    pt.provider_single = objective(s, Problem::provider_single);
    pt.social_dynamic = objective(s, Problem::social_dynamic);
    pt.social_single = objective(s, Problem::social_single);
    pt.provider_no_comp = objective(no_comp, Problem::provider_dynamic);
    pt.social_no_comp = objective(no_comp, Problem::social_dynamic);
    pt.no_comp_empty = !no_comp.feasible_service() || !market_open_no_throw(no_comp);
    out[i] = pt;
  });
  return out;
}

double min_capacity(const Scenario& money, double quote, double risk_aversion) {
  if (!(quote >= 0.0)) throw std::invalid_argument("min_capacity: quote must be >= 0");
  auto joins_at = [&](double mu) {
    Scenario s = money;
    s.risk_aversion = risk_aversion;
    s.service_rate = mu;
    if (!s.feasible_service()) return false;
    return expected_utility(s, 0, quote).value >= 0.0;
  };

  const double floor_rate =
      risk_aversion * (money.delay_cost_rate - money.compensation_rate);
  double hi = std::max(1.0, 2.0 * floor_rate);
  constexpr double kCap = 1e9;
  while (!joins_at(hi)) {
    hi *= 2.0;
    if (hi > kCap) throw std::runtime_error("min_capacity: no service rate below cap suffices");
  }
  double lo = std::max(floor_rate, hi * 1e-12);
  // B_0 is increasing in the service rate; bisect the sign change.
  for (int it = 0; it < 200 && hi - lo > 1e-12 * (1.0 + hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (joins_at(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

MinCapacityCurve min_capacity_curve(const Scenario& money, const std::vector<double>& quote_grid,
                                    const std::vector<double>& r_values) {
  MinCapacityCurve curve;
  curve.quote_grid = quote_grid;
  curve.r_values = r_values;
  curve.mu_min.assign(r_values.size(), std::vector<double>(quote_grid.size(), 0.0));
  for (size_t ri = 0; ri < r_values.size(); ++ri) {
    for (size_t qi = 0; qi < quote_grid.size(); ++qi) {
      curve.mu_min[ri][qi] = min_capacity(money, quote_grid[qi], r_values[ri]);
    }
  }
  return curve;
}

}  // namespace ltq
