#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "ltq/optimize.hpp"
#include "ltq/scenario.hpp"
#include "ltq/sim.hpp"

namespace ltq {

enum class SweepAxis { entrance_fee, compensation_rate, risk_aversion, service_rate, arrival_rate };

const char* sweep_axis_name(SweepAxis axis);               // "p", "l", "r", "mu", "lambda"
std::optional<SweepAxis> sweep_axis_from_name(const std::string& name);
Scenario with_axis_value(const Scenario& base, SweepAxis axis, double value);

struct SweepSpec {
  Scenario base;
  SweepAxis axis = SweepAxis::entrance_fee;
  std::vector<double> grid;  // nonempty, strictly increasing
  std::vector<Problem> problems = {Problem::provider_dynamic, Problem::provider_single,
                                   Problem::social_dynamic, Problem::social_single};
  bool with_simulation = false;
  SimConfig sim;
  int threads = 0;  // 0: LTQ_THREADS env var or hardware concurrency

  void validate() const;
};

struct ProblemOutcome {
  Problem problem;
  int threshold = 0;
  double objective = 0.0;
  std::string quote_summary;
  bool empty_market = false;
  bool infeasible_service = false;
  std::optional<Estimate> sim_profit;
  std::optional<Estimate> sim_social;
};

struct SweepRow {
  double axis_value = 0.0;
  int lower = 0, upper = 0;
  bool infeasible_service = false;
  std::vector<ProblemOutcome> outcomes;
};

struct SweepResult {
  SweepAxis axis;
  std::vector<Problem> problems;
  std::vector<SweepRow> rows;
};

SweepResult run_sweep(const SweepSpec& spec);

/// Per-state optimal quotes under the four problems' optimal policies,
/// with "infinite" (join without compensation) and "balk" markers.
struct QuoteCell {
  enum class Tag { finite, infinite, balk };
  Tag tag = Tag::balk;
  double value = 0.0;
};

struct QuoteTable {
  ThresholdBounds bounds;
  std::array<int, 4> thresholds{};                 // problem order as in Problem
  std::vector<int> states;                         // 0..row_max
  std::array<std::vector<QuoteCell>, 4> columns;
};

QuoteTable quote_table(const Scenario& s);

/// Optimal objectives across a risk-aversion grid, including the l = 0
/// (no compensation) baseline; points where even compensated service is
/// infeasible are reported as empty markets with zero objective.
struct RiskCurvePoint {
  double r = 0.0;
  double provider_dynamic = 0.0;
  double provider_single = 0.0;
  double social_dynamic = 0.0;
  double social_single = 0.0;
  double provider_no_comp = 0.0;
  double social_no_comp = 0.0;
  bool no_comp_empty = false;  // r at or beyond mu/c
};

std::vector<RiskCurvePoint> risk_aversion_curves(const Scenario& base,
                                                 const std::vector<double>& r_grid);

/// Smallest service rate under which an arrival to an empty system joins
/// at quote d and risk aversion r; money parameters from `money`.
/// Throws std::runtime_error when no rate below the cap works.
double min_capacity(const Scenario& money, double quote, double risk_aversion);

struct MinCapacityCurve {
  std::vector<double> quote_grid;
  std::vector<double> r_values;
  std::vector<std::vector<double>> mu_min;  // [r index][quote index]
};

MinCapacityCurve min_capacity_curve(const Scenario& money, const std::vector<double>& quote_grid,
                                    const std::vector<double>& r_values);

}  // namespace ltq
