#include <doctest.h>

#include <cmath>
#include <sstream>

#include "ltq/csv.hpp"
#include "ltq/optimize.hpp"
#include "ltq/policy_file.hpp"
#include "ltq/scenario_file.hpp"
#include "support/scenarios.hpp"

using namespace ltq;
using namespace ltq::test;

namespace {

const char* kBaseText =
    "# base case\n"
    "R = 15\n"
    "p = 10\n"
    "c = 8\n"
    "l = 3\n"
    "r = 0.5\n"
    "lambda = 10\n"
    "mu = 12\n";

}  // namespace

TEST_CASE("scenario file round trip with comments and sim keys") {
  std::string text = kBaseText;
  text += "sim.seed = 9\nsim.replications = 5\nsim.events = 50000\nsim.warmup = 0.2\n";
  const ScenarioFile file = parse_scenario_text(text);
  CHECK(file.scenario.service_value == 15.0);
  CHECK(file.scenario.compensation_rate == 3.0);
  CHECK(file.sim.seed == 9);
  CHECK(file.sim.replications == 5);
  CHECK(file.sim.horizon.value == 50000.0);
  CHECK(file.sim.warmup_fraction == 0.2);
}

TEST_CASE("scenario parse errors carry line numbers") {
  try {
    parse_scenario_text("R = 15\np = 10\nbogus = 1\n");
    FAIL("expected parse error");
  } catch (const scenario_parse_error& e) {
    CHECK(e.line() == 3);
    CHECK(std::string(e.what()).find("bogus") != std::string::npos);
  }

  CHECK_THROWS_AS(parse_scenario_text("R = 15\n"), scenario_parse_error);       // missing keys
  CHECK_THROWS_AS(parse_scenario_text(std::string(kBaseText) + "p = x\n"),
                  scenario_parse_error);                                         // bad number
  // Invariants enforced at parse time: p > R.
  std::string bad = kBaseText;
  bad += "p = 16\n";
  CHECK_THROWS_AS(parse_scenario_text(bad), scenario_parse_error);
}

TEST_CASE("mu optional only for the capacity use case") {
  std::string no_mu = "R = 15\np = 10\nc = 8\nl = 3\nr = 0.5\nlambda = 10\n";
  CHECK_THROWS_AS(parse_scenario_text(no_mu), scenario_parse_error);
  const ScenarioFile file = parse_scenario_text(no_mu, /*require_mu=*/false);
  CHECK_FALSE(file.has_mu);
}

TEST_CASE("policy files round trip to the same objective") {
  for (Problem p : {Problem::provider_dynamic, Problem::provider_single,
                    Problem::social_dynamic, Problem::social_single}) {
    const SolveResult res = solve(base_scenario(), p);
    const std::string text = policy_to_text(res.policy, p);
    const LoadedPolicy loaded = parse_policy_text(text);
    CHECK(loaded.problem == p);
    CHECK(loaded.policy.threshold == res.policy.threshold);
    const double re = problem_is_social(p) ? eval_social_rate(base_scenario(), loaded.policy)
                                           : eval_profit_rate(base_scenario(), loaded.policy);
    CHECK(std::abs(re - res.objective) <= 1e-10);
  }
}

TEST_CASE("policy file keeps infinite quotes") {
  const SolveResult res = solve(base_scenario(), Problem::provider_dynamic);
  const std::string text = policy_to_text(res.policy, Problem::provider_dynamic);
  CHECK(text.find("quote.0=inf") != std::string::npos);
  const LoadedPolicy loaded = parse_policy_text(text);
  CHECK(loaded.policy.quote_at(0) == kInfiniteQuote);
}

TEST_CASE("policy parse rejects junk") {
  CHECK_THROWS(parse_policy_text("regime=qux\nthreshold=3\nquote=1\n"));
  CHECK_THROWS(parse_policy_text("threshold=3\nquote=1\n"));
  CHECK_THROWS(parse_policy_text("regime=single\nthreshold=3\nwat=1\n"));
}

TEST_CASE("csv outputs are stable and carry provenance, not timestamps") {
  SweepSpec spec;
  spec.base = base_scenario();
  spec.axis = SweepAxis::entrance_fee;
  spec.grid = {9.0, 10.0};
  const SweepResult result = run_sweep(spec);
  const std::string a = sweep_to_csv(spec.base, result);
  const std::string b = sweep_to_csv(spec.base, run_sweep(spec));
  CHECK(a == b);
  CHECK(a.rfind("# ltq", 0) == 0);
  CHECK(a.find(scenario_hash(spec.base)) != std::string::npos);

  std::istringstream lines(a);
  std::string line;
  int data_rows = 0;
  bool header_seen = false;
  while (std::getline(lines, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;
      CHECK(line.rfind("axis,n_lo,n_hi", 0) == 0);
      continue;
    }
    ++data_rows;
  }
  CHECK(data_rows == 2);
}

TEST_CASE("quote table csv marks infinities and balking") {
  const QuoteTable table = quote_table(base_scenario());
  const std::string csv = quote_table_to_csv(base_scenario(), table);
  CHECK(csv.find(",inf") != std::string::npos);
  CHECK(csv.find(",-") != std::string::npos);
}

TEST_CASE("scenario hash distinguishes scenarios") {
  CHECK(scenario_hash(base_scenario()) != scenario_hash(with_fee(base_scenario(), 11.0)));
  CHECK(scenario_hash(base_scenario()) == scenario_hash(base_scenario()));
}
