#pragma once

#include <string>

#include "ltq/optimize.hpp"

namespace ltq {

/// Quotation policies round-trip through a flat key=value document with
/// full-precision values ("inf" for uncompensated states).
std::string policy_to_text(const QuotationPolicy& policy, Problem problem);
void save_policy_file(const std::string& path, const QuotationPolicy& policy, Problem problem);

struct LoadedPolicy {
  QuotationPolicy policy;
  Problem problem = Problem::provider_dynamic;
};

LoadedPolicy parse_policy_text(const std::string& text);
LoadedPolicy load_policy_file(const std::string& path);

}  // namespace ltq
