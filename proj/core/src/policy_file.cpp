#include "ltq/policy_file.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace ltq {

namespace {

std::string full_precision(double x) {
  if (x == kInfiniteQuote) return "inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

double parse_value(const std::string& v) {
  if (v == "inf") return kInfiniteQuote;
  return std::stod(v);
}

}  // namespace

std::string policy_to_text(const QuotationPolicy& policy, Problem problem) {
  std::ostringstream out;
  out << "problem=" << problem_name(problem) << "\n";
  out << "regime=" << (policy.regime == Regime::single ? "single" : "dynamic") << "\n";
  out << "threshold=" << policy.threshold << "\n";
  if (policy.regime == Regime::single) {
    out << "quote=" << full_precision(policy.quotes.front()) << "\n";
  } else {
    for (size_t n = 0; n < policy.quotes.size(); ++n) {
      out << "quote." << n << "=" << full_precision(policy.quotes[n]) << "\n";
    }
  }
  return out.str();
}

void save_policy_file(const std::string& path, const QuotationPolicy& policy, Problem problem) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write policy file: " + path);
  out << policy_to_text(policy, problem);
}

LoadedPolicy parse_policy_text(const std::string& text) {
  LoadedPolicy out;
  bool saw_threshold = false, saw_regime = false;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos) throw std::runtime_error("policy file: expected key=value");
    const std::string key = line.substr(0, eq);
    const std::string value = line.substr(eq + 1);
    if (key == "problem") {
      bool found = false;
      for (Problem p : {Problem::provider_dynamic, Problem::provider_single,
                        Problem::social_dynamic, Problem::social_single}) {
        if (value == problem_name(p)) {
          out.problem = p;
          found = true;
        }
      }
      if (!found) throw std::runtime_error("policy file: unknown problem '" + value + "'");
    } else if (key == "regime") {
      if (value == "single") {
        out.policy.regime = Regime::single;
      } else if (value == "dynamic") {
        out.policy.regime = Regime::dynamic;
      } else {
        throw std::runtime_error("policy file: unknown regime '" + value + "'");
      }
      saw_regime = true;
    } else if (key == "threshold") {
      out.policy.threshold = std::stoi(value);
      saw_threshold = true;
    } else if (key == "quote") {
      out.policy.quotes = {parse_value(value)};
    } else if (key.rfind("quote.", 0) == 0) {
      const size_t idx = std::stoul(key.substr(6));
      if (out.policy.quotes.size() <= idx) out.policy.quotes.resize(idx + 1, 0.0);
      out.policy.quotes[idx] = parse_value(value);
    } else {
      throw std::runtime_error("policy file: unknown key '" + key + "'");
    }
  }
  if (!saw_regime || !saw_threshold || out.policy.quotes.empty()) {
    throw std::runtime_error("policy file: regime, threshold and quotes are required");
  }
  return out;
}

LoadedPolicy load_policy_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open policy file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_policy_text(buf.str());
}

}  // namespace ltq
