#include "ltq/queue_dist.hpp"

#include <stdexcept>

#include "ltq/erlang.hpp"

namespace ltq {

namespace {

void check_queue(int capacity, double arrival_rate, double service_rate) {
  if (capacity < 1) throw std::invalid_argument("capacity must be >= 1");
  if (!(arrival_rate > 0.0)) throw std::invalid_argument("arrival_rate must be > 0");
  if (!(service_rate > 0.0)) throw std::invalid_argument("service_rate must be > 0");
}

}  // namespace

std::vector<double> stationary_dist(int capacity, double arrival_rate, double service_rate) {
  check_queue(capacity, arrival_rate, service_rate);
  const double rho = arrival_rate / service_rate;
  const double norm = geom_sum(rho, capacity + 1);
  std::vector<double> q(capacity + 1);
  double pow = 1.0;
  for (int n = 0; n <= capacity; ++n) {
    q[n] = pow / norm;
    pow *= rho;
  }
  return q;
}

std::vector<double> joining_state_weights(const FiniteQueueSojourn& q) {
  check_queue(q.capacity, q.arrival_rate, q.service_rate);
  const double rho = q.arrival_rate / q.service_rate;
  const double norm = geom_sum(rho, q.capacity);
  std::vector<double> w(q.capacity);
  double pow = 1.0;
  for (int n = 0; n < q.capacity; ++n) {
    w[n] = pow / norm;
    pow *= rho;
  }
  return w;
}

double marginal_sojourn_tail(const FiniteQueueSojourn& q, double x) {
  if (x < 0.0) throw std::domain_error("marginal_sojourn_tail: x must be >= 0");
  const auto w = joining_state_weights(q);
  double tail = 0.0;
  for (int n = 0; n < q.capacity; ++n) {
    tail += w[n] * erlang_tail({n + 1, q.service_rate}, x);
  }
  return tail < 1.0 ? tail : 1.0;
}

double marginal_sojourn_pdf(const FiniteQueueSojourn& q, double x) {
  if (x < 0.0) throw std::domain_error("marginal_sojourn_pdf: x must be >= 0");
  const auto w = joining_state_weights(q);
  double pdf = 0.0;
  for (int n = 0; n < q.capacity; ++n) {
    pdf += w[n] * erlang_pdf({n + 1, q.service_rate}, x);
  }
  return pdf;
}

double marginal_hazard(const FiniteQueueSojourn& q, double x) {
  const double tail = marginal_sojourn_tail(q, x);
  if (tail <= 0.0) throw std::domain_error("marginal_hazard: tail underflowed to zero");
  return marginal_sojourn_pdf(q, x) / tail;
}

}  // namespace ltq
