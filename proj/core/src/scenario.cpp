#include "ltq/scenario.hpp"

#include <cmath>
#include <cstdio>

namespace ltq {

void Scenario::validate() const {
  auto finite = [](double x) { return std::isfinite(x); };
  if (!finite(service_value) || !finite(entrance_fee) || !finite(delay_cost_rate) ||
      !finite(compensation_rate) || !finite(risk_aversion) || !finite(arrival_rate) ||
      !finite(service_rate)) {
    throw std::invalid_argument("scenario: all parameters must be finite");
  }
  if (entrance_fee > service_value)
    throw std::invalid_argument("scenario: entrance fee p must not exceed service value R");
  if (!(delay_cost_rate > 0.0))
    throw std::invalid_argument("scenario: delay cost rate c must be > 0");
  if (compensation_rate < 0.0 || compensation_rate > delay_cost_rate)
    throw std::invalid_argument("scenario: compensation rate l must satisfy 0 <= l <= c");
  if (risk_aversion < 0.0)
    throw std::invalid_argument("scenario: risk aversion r must be >= 0");
  if (!(arrival_rate > 0.0))
    throw std::invalid_argument("scenario: arrival rate lambda must be > 0");
  if (!(service_rate > 0.0))
    throw std::invalid_argument("scenario: service rate mu must be > 0");
}

std::string Scenario::canonical_string() const {
  char buf[256];
  std::snprintf(buf, sizeof(buf), "R=%.17g;p=%.17g;c=%.17g;l=%.17g;r=%.17g;lambda=%.17g;mu=%.17g",
                service_value, entrance_fee, delay_cost_rate, compensation_rate, risk_aversion,
                arrival_rate, service_rate);
  return buf;
}

}  // namespace ltq
