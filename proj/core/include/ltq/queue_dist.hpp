#pragma once

#include <vector>

namespace ltq {

/// Stationary queue-length distribution of an M/M/1/capacity queue:
/// q(n) = rho^n / sum_{k<=capacity} rho^k, with the uniform limit at rho = 1.
std::vector<double> stationary_dist(int capacity, double arrival_rate, double service_rate);

/// Sojourn time of a customer who joins an M/M/1/capacity queue in steady
/// state. By PASTA the joining customer sees state n with probability
/// proportional to rho^n restricted to the joining states 0..capacity-1;
/// conditional on n the sojourn is Erlang(n+1, service_rate).
struct FiniteQueueSojourn {
  int capacity;         // n0 >= 1
  double arrival_rate;  // lambda > 0
  double service_rate;  // mu > 0
};

/// Mixing weights over joining states 0..capacity-1 (renormalized PASTA).
std::vector<double> joining_state_weights(const FiniteQueueSojourn& q);

double marginal_sojourn_tail(const FiniteQueueSojourn& q, double x);
double marginal_sojourn_pdf(const FiniteQueueSojourn& q, double x);

/// Hazard rate pdf/tail; throws when the tail has underflowed to zero.
double marginal_hazard(const FiniteQueueSojourn& q, double x);

}  // namespace ltq
