#pragma once

#include <cstdint>
#include <vector>

#include "ltq/optimize.hpp"
#include "ltq/scenario.hpp"

namespace ltq {

struct SimHorizon {
  enum class Unit { events, time };
  Unit unit = Unit::events;
  double value = 2e5;
};

struct SimConfig {
  SimHorizon horizon;
  double warmup_fraction = 0.1;  // discarded share of each replication
  int replications = 20;
  std::uint64_t seed = 1;
  int batch_count = 20;  // batch-means batches per replication

  void validate() const;
};

/// mean +/- half-width of a 95% confidence interval from batch means.
struct Estimate {
  double mean = 0.0;
  double half_width = 0.0;

  bool covers(double x) const { return x >= mean - half_width && x <= mean + half_width; }
};

struct SimEstimate {
  Estimate profit_rate;
  Estimate social_rate;
  std::vector<double> occupancy;           // time fraction per state 0..n0
  std::vector<Estimate> occupancy_ci;
  std::vector<double> join_fraction_by_state;  // joins / arrivals seeing n
  std::vector<double> mean_lateness_paid;      // mean (X - d_n)^+ per entrant at n
  std::vector<Estimate> state_utility;         // realized-utility mean per join state
  std::vector<std::int64_t> completions_by_state;
  double measured_time = 0.0;
  std::int64_t total_events = 0;
};

/// Discrete-event simulation of the observable M/M/1 queue under the given
/// quotation policy: Poisson arrivals, exponential FCFS service, an arrival
/// seeing n joins iff n < threshold and realizes R - p - cX + l(X - d_n)^+
/// on completion. Replications use independent streams derived from
/// (seed, replication); equal seeds give bit-identical results.
SimEstimate simulate(const Scenario& s, const QuotationPolicy& policy, const SimConfig& cfg);

/// Monte-Carlo estimate of B_state(d_state) by sampling the sojourn
/// Erlang(state+1, mu) directly.
Estimate estimate_state_utility(const Scenario& s, const QuotationPolicy& policy,
                                const SimConfig& cfg, int state);

/// 97.5% Student-t quantile used for the 95% intervals.
double t_quantile_975(int dof);

}  // namespace ltq
