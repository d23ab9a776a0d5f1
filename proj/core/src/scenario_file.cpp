#include "ltq/scenario_file.hpp"

#include <cctype>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace ltq {

namespace {

std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

double parse_number(const std::string& value, int line) {
  if (value == "inf" || value == "+inf") return kInfiniteQuote;
  try {
    size_t used = 0;
    const double x = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument("trailing characters");
    return x;
  } catch (const std::exception&) {
    throw scenario_parse_error(line, "cannot parse number '" + value + "'");
  }
}

}  // namespace

ScenarioFile parse_scenario_text(const std::string& text, bool require_mu) {
  ScenarioFile out;
  Scenario& s = out.scenario;
  s = {0, 0, 0, 0, 0, 0, 0};

  bool saw[7] = {false, false, false, false, false, false, false};
  enum { kR, kP, kC, kL, kRisk, kLambda, kMu };

  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw;
    if (const size_t hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;

    const size_t eq = line.find('=');
    if (eq == std::string::npos) throw scenario_parse_error(line_no, "expected key=value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (value.empty()) throw scenario_parse_error(line_no, "missing value for '" + key + "'");

    auto num = [&]() { return parse_number(value, line_no); };
    if (key == "R") {
      s.service_value = num(); saw[kR] = true;
    } else if (key == "p") {
      s.entrance_fee = num(); saw[kP] = true;
    } else if (key == "c") {
      s.delay_cost_rate = num(); saw[kC] = true;
    } else if (key == "l") {
      s.compensation_rate = num(); saw[kL] = true;
    } else if (key == "r") {
      s.risk_aversion = num(); saw[kRisk] = true;
    } else if (key == "lambda") {
      s.arrival_rate = num(); saw[kLambda] = true;
    } else if (key == "mu") {
      s.service_rate = num(); saw[kMu] = true;
    } else if (key == "solver.threshold_cap") {
      out.threshold_cap = static_cast<int>(num());
    } else if (key == "sim.seed") {
      out.sim.seed = static_cast<std::uint64_t>(num());
    } else if (key == "sim.replications") {
      out.sim.replications = static_cast<int>(num());
    } else if (key == "sim.events") {
      out.sim.horizon = {SimHorizon::Unit::events, num()};
    } else if (key == "sim.time") {
      out.sim.horizon = {SimHorizon::Unit::time, num()};
    } else if (key == "sim.warmup") {
      out.sim.warmup_fraction = num();
    } else if (key == "sim.batches") {
      out.sim.batch_count = static_cast<int>(num());
    } else {
      throw scenario_parse_error(line_no, "unknown key '" + key + "'");
    }
  }

  static constexpr const char* names[7] = {"R", "p", "c", "l", "r", "lambda", "mu"};
  for (int i = 0; i < 7; ++i) {
    if (i == kMu && !require_mu) continue;
    if (!saw[i]) {
      throw scenario_parse_error(line_no, std::string("missing required key '") + names[i] + "'");
    }
  }
  out.has_mu = saw[kMu];
  if (!out.has_mu) s.service_rate = 1.0;  // placeholder; min-capacity overrides

  try {
    s.validate();
  } catch (const std::invalid_argument& e) {
    throw scenario_parse_error(line_no, e.what());
  }
  return out;
}

ScenarioFile load_scenario_file(const std::string& path, bool require_mu) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scenario file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario_text(buf.str(), require_mu);
}

std::string scenario_hash(const Scenario& s) {
  const std::string canon = s.canonical_string();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canon) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace ltq
