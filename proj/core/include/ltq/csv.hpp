#pragma once

#include <string>

#include "ltq/experiments.hpp"
#include "ltq/optimize.hpp"
#include "ltq/scenario.hpp"

namespace ltq {

/// '#'-prefixed provenance lines (tool version + scenario hash, no
/// timestamps) so repeated runs diff clean.
std::string csv_provenance(const Scenario& s);

std::string sweep_to_csv(const Scenario& base, const SweepResult& result);
std::string quote_table_to_csv(const Scenario& s, const QuoteTable& table);
std::string risk_curves_to_csv(const Scenario& base, const std::vector<RiskCurvePoint>& points);
std::string min_capacity_to_csv(const Scenario& money, const MinCapacityCurve& curve);
std::string solve_to_csv(const Scenario& s, const SolveResult& result);

void write_file(const std::string& path, const std::string& contents);

}  // namespace ltq
