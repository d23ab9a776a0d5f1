// Lead-time quotation workbench: solves the four provider/social x
// dynamic/single quotation problems for an observable M/M/1 make-to-order
// queue with CARA customers, sweeps parameters, and cross-checks the
// closed forms against a discrete-event simulator.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ltq/csv.hpp"
#include "ltq/experiments.hpp"
#include "ltq/optimize.hpp"
#include "ltq/policy_file.hpp"
#include "ltq/queue_dist.hpp"
#include "ltq/quotes.hpp"
#include "ltq/scenario_file.hpp"
#include "ltq/sim.hpp"
#include "ltq/utility.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInfeasible = 2;

std::string fixed2(double x) {
  if (x == ltq::kInfiniteQuote) return "inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.2f", x);
  return buf;
}

std::string bound_str(int upper) {
  return upper == ltq::kUnboundedThreshold ? "inf" : std::to_string(upper);
}

ltq::Problem problem_from_flag(const std::string& flag) {
  for (ltq::Problem p :
       {ltq::Problem::provider_dynamic, ltq::Problem::provider_single,
        ltq::Problem::social_dynamic, ltq::Problem::social_single}) {
    if (flag == ltq::problem_name(p)) return p;
  }
  throw CLI::ValidationError("--problem", "unknown problem '" + flag + "'");
}

const char* threshold_label(ltq::Problem p) {
  switch (p) {
    case ltq::Problem::provider_dynamic: return "n_P";
    case ltq::Problem::provider_single: return "n_Pc";
    case ltq::Problem::social_dynamic: return "n_S";
    case ltq::Problem::social_single: return "n_Sc";
  }
  return "n";
}

const char* objective_label(ltq::Problem p) {
  switch (p) {
    case ltq::Problem::provider_dynamic: return "P*";
    case ltq::Problem::provider_single: return "P*_c";
    case ltq::Problem::social_dynamic: return "S*";
    case ltq::Problem::social_single: return "S*_c";
  }
  return "obj";
}

// "lo:hi:step" or comma-separated values.
std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> grid;
  if (text.find(':') != std::string::npos) {
    double lo, hi, step;
    if (std::sscanf(text.c_str(), "%lf:%lf:%lf", &lo, &hi, &step) != 3 || step <= 0) {
      throw CLI::ValidationError("--grid", "expected lo:hi:step with step > 0");
    }
    for (double x = lo; x <= hi + 1e-12 * std::max(1.0, std::abs(hi)); x += step) {
      grid.push_back(x);
    }
    return grid;
  }
  size_t pos = 0;
  while (pos < text.size()) {
    size_t comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    grid.push_back(std::stod(text.substr(pos, comma - pos)));
    pos = comma + 1;
  }
  if (grid.empty()) throw CLI::ValidationError("--grid", "empty grid");
  return grid;
}

void print_solve(const ltq::Scenario& s, const ltq::SolveResult& res) {
  std::cout << "bounds [" << res.bounds.lower << "," << bound_str(res.bounds.upper) << "]"
            << (res.bounds.market_open ? "" : "  (market closed)") << "\n";
  std::cout << threshold_label(res.problem) << "=" << res.policy.threshold << ", "
            << objective_label(res.problem) << "=" << fixed2(res.objective) << "\n";
  if (!res.note.empty()) std::cout << "note: " << res.note << "\n";
  std::cout << "  n  quote    B_n      G_n      q(n)\n";
  for (const ltq::StateDiagnostic& d : res.per_state) {
    std::printf("%3d  %-7s %-8s %-8s %s\n", d.state, fixed2(d.quote).c_str(),
                fixed2(d.utility).c_str(), fixed2(d.profit).c_str(),
                fixed2(d.occupancy).c_str());
  }
  (void)s;
}

int run_solve(const std::string& scenario_path, const std::string& problem_flag,
              const std::string& csv_out, const std::string& policy_out) {
  const ltq::ScenarioFile file = ltq::load_scenario_file(scenario_path);
  const ltq::Problem problem = problem_from_flag(problem_flag);
  const ltq::SolveResult res = ltq::solve(file.scenario, problem);
  print_solve(file.scenario, res);
  if (!csv_out.empty()) ltq::write_file(csv_out, ltq::solve_to_csv(file.scenario, res));
  if (!policy_out.empty()) ltq::save_policy_file(policy_out, res.policy, problem);
  return kExitOk;
}

int run_sweep(const std::string& scenario_path, const std::string& axis_name,
              const std::string& grid_text, std::vector<std::string> problem_flags,
              const std::string& csv_out, bool with_sim, int threads) {
  const ltq::ScenarioFile file = ltq::load_scenario_file(scenario_path);
  ltq::SweepSpec spec;
  spec.base = file.scenario;
  const auto axis = ltq::sweep_axis_from_name(axis_name);
  if (!axis) throw CLI::ValidationError("--axis", "expected one of p,l,r,mu,lambda");
  spec.axis = *axis;
  spec.grid = parse_grid(grid_text);
  if (!problem_flags.empty()) {
    spec.problems.clear();
    for (const std::string& f : problem_flags) spec.problems.push_back(problem_from_flag(f));
  }
  spec.with_simulation = with_sim;
  spec.sim = file.sim;
  spec.threads = threads;

  const ltq::SweepResult result = ltq::run_sweep(spec);
  for (const ltq::SweepRow& row : result.rows) {
    std::cout << ltq::sweep_axis_name(spec.axis) << "=" << fixed2(row.axis_value);
    if (row.infeasible_service) {
      std::cout << "  infeasible service\n";
      continue;
    }
    std::cout << "  [" << row.lower << "," << bound_str(row.upper) << "]";
    for (const ltq::ProblemOutcome& oc : row.outcomes) {
      std::cout << "  " << threshold_label(oc.problem) << "=" << oc.threshold << " "
                << objective_label(oc.problem) << "=" << fixed2(oc.objective);
    }
    std::cout << "\n";
  }
  if (!csv_out.empty()) ltq::write_file(csv_out, ltq::sweep_to_csv(spec.base, result));
  return kExitOk;
}

int run_quote_table(const std::string& scenario_path, const std::string& csv_out) {
  const ltq::ScenarioFile file = ltq::load_scenario_file(scenario_path);
  const ltq::QuoteTable table = ltq::quote_table(file.scenario);
  std::cout << "bounds [" << table.bounds.lower << "," << bound_str(table.bounds.upper) << "]\n";
  std::cout << "  n  d~P      d_Pc     d~S      d_Sc\n";
  for (size_t i = 0; i < table.states.size(); ++i) {
    std::printf("%3d", table.states[i]);
    for (int j = 0; j < 4; ++j) {
      const ltq::QuoteCell& cell = table.columns[j][i];
      const std::string text = cell.tag == ltq::QuoteCell::Tag::balk ? "-"
                               : cell.tag == ltq::QuoteCell::Tag::infinite
                                   ? "inf"
                                   : fixed2(cell.value);
      std::printf("  %-7s", text.c_str());
    }
    std::printf("\n");
  }
  if (!csv_out.empty()) {
    ltq::write_file(csv_out, ltq::quote_table_to_csv(file.scenario, table));
  }
  return kExitOk;
}

int run_simulate(const std::string& scenario_path, const std::string& policy_path,
                 const std::string& problem_flag, std::optional<std::uint64_t> seed,
                 std::optional<int> replications, std::optional<double> events,
                 std::optional<double> time_horizon, std::optional<double> warmup,
                 std::optional<int> batches) {
  const ltq::ScenarioFile file = ltq::load_scenario_file(scenario_path);
  ltq::SimConfig cfg = file.sim;
  if (seed) cfg.seed = *seed;
  if (replications) cfg.replications = *replications;
  if (events) cfg.horizon = {ltq::SimHorizon::Unit::events, *events};
  if (time_horizon) cfg.horizon = {ltq::SimHorizon::Unit::time, *time_horizon};
  if (warmup) cfg.warmup_fraction = *warmup;
  if (batches) cfg.batch_count = *batches;

  ltq::QuotationPolicy policy;
  ltq::Problem problem;
  if (!policy_path.empty()) {
    const ltq::LoadedPolicy loaded = ltq::load_policy_file(policy_path);
    policy = loaded.policy;
    problem = loaded.problem;
  } else {
    problem = problem_from_flag(problem_flag.empty() ? "provider-dynamic" : problem_flag);
    policy = ltq::solve(file.scenario, problem).policy;
  }

  const ltq::Scenario& s = file.scenario;
  const ltq::SimEstimate est = ltq::simulate(s, policy, cfg);
  const double profit = ltq::eval_profit_rate(s, policy);
  const double social = ltq::eval_social_rate(s, policy);

  std::cout << "policy " << ltq::problem_name(problem) << " threshold=" << policy.threshold
            << " seed=" << cfg.seed << " replications=" << cfg.replications << "\n";
  std::cout << "profit rate: sim " << fixed2(est.profit_rate.mean) << " +/- "
            << fixed2(est.profit_rate.half_width) << "  analytic " << fixed2(profit)
            << "  delta " << fixed2(est.profit_rate.mean - profit) << "\n";
  std::cout << "social rate: sim " << fixed2(est.social_rate.mean) << " +/- "
            << fixed2(est.social_rate.half_width) << "  analytic " << fixed2(social)
            << "  delta " << fixed2(est.social_rate.mean - social) << "\n";
  const auto q = ltq::stationary_dist(std::max(policy.threshold, 1), s.arrival_rate,
                                      s.service_rate);
  std::cout << "  n  occ_sim  occ_ci   occ_exact\n";
  for (int n = 0; n <= policy.threshold; ++n) {
    std::printf("%3d  %-8s %-8s %s\n", n, fixed2(est.occupancy[n]).c_str(),
                fixed2(est.occupancy_ci[n].half_width).c_str(),
                fixed2(policy.threshold == 0 ? 1.0 : q[n]).c_str());
  }
  return kExitOk;
}

int run_min_capacity(const std::string& scenario_path, const std::string& d_grid_text,
                     std::vector<double> r_values, const std::string& csv_out) {
  const ltq::ScenarioFile file = ltq::load_scenario_file(scenario_path, /*require_mu=*/false);
  std::vector<double> grid = parse_grid(d_grid_text);
  if (r_values.empty()) r_values = {0.0, 0.1, 0.5};
  const ltq::MinCapacityCurve curve =
      ltq::min_capacity_curve(file.scenario, grid, r_values);
  std::cout << "  d";
  for (double r : r_values) std::printf("  mu_min(r=%s)", fixed2(r).c_str());
  std::cout << "\n";
  for (size_t qi = 0; qi < grid.size(); ++qi) {
    std::printf("%5s", fixed2(grid[qi]).c_str());
    for (size_t ri = 0; ri < r_values.size(); ++ri) {
      std::printf("  %12s", fixed2(curve.mu_min[ri][qi]).c_str());
    }
    std::printf("\n");
  }
  if (!csv_out.empty()) {
    ltq::write_file(csv_out, ltq::min_capacity_to_csv(file.scenario, curve));
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lead-time quotation policies for an observable make-to-order queue"};
  app.require_subcommand(1);

  std::string scenario_path, problem_flag, csv_out, policy_out, policy_path;
  std::string axis_name, grid_text;
  std::vector<std::string> problem_flags;
  std::vector<double> r_values;
  bool with_sim = false;
  int threads = 0;
  std::optional<std::uint64_t> seed;
  std::optional<int> replications, batches;
  std::optional<double> events, time_horizon, warmup;

  CLI::App* solve = app.add_subcommand("solve", "solve one quotation problem");
  solve->add_option("--scenario", scenario_path, "scenario file")->required();
  solve->add_option("--problem", problem_flag,
                    "provider-dynamic|provider-single|social-dynamic|social-single")
      ->required();
  solve->add_option("--csv", csv_out, "write per-state diagnostics CSV");
  solve->add_option("--policy-out", policy_out, "write the optimal policy file");

  CLI::App* sweep = app.add_subcommand("sweep", "solve across a parameter grid");
  sweep->add_option("--scenario", scenario_path)->required();
  sweep->add_option("--axis", axis_name, "p|l|r|mu|lambda")->required();
  sweep->add_option("--grid", grid_text, "lo:hi:step or v1,v2,...")->required();
  sweep->add_option("--problems", problem_flags, "subset of problems (default: all four)");
  sweep->add_option("--csv", csv_out);
  sweep->add_flag("--with-sim", with_sim, "attach simulation confidence intervals");
  sweep->add_option("--threads", threads, "solver threads (default: LTQ_THREADS or hardware)");

  CLI::App* qtable = app.add_subcommand("quote-table", "per-state optimal quotes");
  qtable->add_option("--scenario", scenario_path)->required();
  qtable->add_option("--csv", csv_out);

  CLI::App* sim = app.add_subcommand("simulate", "discrete-event validation run");
  sim->add_option("--scenario", scenario_path)->required();
  sim->add_option("--policy", policy_path, "policy file from a previous solve");
  sim->add_option("--problem", problem_flag, "solve this problem and simulate its policy");
  sim->add_option("--seed", seed);
  sim->add_option("--replications", replications);
  sim->add_option("--events", events, "events per replication");
  sim->add_option("--time", time_horizon, "simulated time per replication");
  sim->add_option("--warmup", warmup, "warmup fraction in [0,1)");
  sim->add_option("--batches", batches, "batch count for batch-means CIs");

  CLI::App* mincap = app.add_subcommand("min-capacity",
                                        "smallest service rate enticing an arrival at state 0");
  mincap->add_option("--scenario", scenario_path, "scenario file (mu may be omitted)")
      ->required();
  mincap->add_option("--d-grid", grid_text, "lead-time grid lo:hi:step")->required();
  mincap->add_option("--r", r_values, "risk aversion values (default 0 0.1 0.5)");
  mincap->add_option("--csv", csv_out);

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) return run_solve(scenario_path, problem_flag, csv_out, policy_out);
    if (sweep->parsed()) {
      return run_sweep(scenario_path, axis_name, grid_text, problem_flags, csv_out, with_sim,
                       threads);
    }
    if (qtable->parsed()) return run_quote_table(scenario_path, csv_out);
    if (sim->parsed()) {
      return run_simulate(scenario_path, policy_path, problem_flag, seed, replications, events,
                          time_horizon, warmup, batches);
    }
    if (mincap->parsed()) return run_min_capacity(scenario_path, grid_text, r_values, csv_out);
  } catch (const ltq::infeasible_service_error& e) {
    std::cerr << "infeasible service: mu <= r(c - l) (" << e.what() << ")\n";
    return kExitInfeasible;
  } catch (const ltq::scenario_parse_error& e) {
    std::cerr << "scenario error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
