#pragma once

#include <limits>
#include <stdexcept>
#include <string>

namespace ltq {

inline constexpr double kInfiniteQuote = std::numeric_limits<double>::infinity();

/// Balking threshold value standing in for "unbounded" (compensation equal
/// to the waiting cost makes every state acceptable at quote 0).
inline constexpr int kUnboundedThreshold = std::numeric_limits<int>::max();

class infeasible_service_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class invalid_policy_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Market and system primitives of the make-to-order queue.
struct Scenario {
  double service_value;      // value delivered to the customer on completion
  double entrance_fee;       // paid on joining
  double delay_cost_rate;    // customer cost per unit of sojourn time
  double compensation_rate;  // paid per unit of lateness beyond the quote
  double risk_aversion;      // CARA coefficient, >= 0
  double arrival_rate;
  double service_rate;

  /// Throws std::invalid_argument when the primitives are out of range
  /// (fee above value, compensation above delay cost, nonpositive rates).
  void validate() const;

  /// Service fast enough to outrun the risk-adjusted late-waiting cost;
  /// when false every expected utility is -infinity.
  bool feasible_service() const {
    return service_rate > risk_aversion * (delay_cost_rate - compensation_rate);
  }

  double utilization() const { return arrival_rate / service_rate; }

  /// Exponential-tilt rate when the full delay cost applies: mu - r c.
  double tilted_rate_full_cost() const {
    return service_rate - risk_aversion * delay_cost_rate;
  }

  /// Exponential-tilt rate net of compensation: v = mu - r (c - l).
  double tilted_rate_late_cost() const {
    return service_rate - risk_aversion * (delay_cost_rate - compensation_rate);
  }

  bool risk_neutral() const { return risk_aversion == 0.0; }

  /// Canonical "key=value;..." form used for provenance hashes.
  std::string canonical_string() const;
};

}  // namespace ltq
