#pragma once

#include <optional>
#include <string>

#include "ltq/scenario.hpp"
#include "ltq/sim.hpp"

namespace ltq {

/// Parse failure with the offending line number.
class scenario_parse_error : public std::runtime_error {
 public:
  scenario_parse_error(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// Flat key=value scenario document. Required keys: R, p, c, l, r, lambda,
/// mu (mu may be omitted only when `require_mu` is false, for the
/// min-capacity command). Optional keys: solver.threshold_cap, sim.seed,
/// sim.replications, sim.events, sim.time, sim.warmup, sim.batches.
/// '#' starts a comment; unknown keys are rejected with their line number.
struct ScenarioFile {
  Scenario scenario{};
  bool has_mu = false;
  std::optional<int> threshold_cap;
  SimConfig sim;  // defaults unless sim.* keys are present
};

ScenarioFile parse_scenario_text(const std::string& text, bool require_mu = true);
ScenarioFile load_scenario_file(const std::string& path, bool require_mu = true);

/// FNV-1a hash of the canonical scenario string; stamped into CSV headers.
std::string scenario_hash(const Scenario& s);

inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace ltq
