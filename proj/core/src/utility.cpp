#include "ltq/utility.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "ltq/erlang.hpp"
#include "ltq/quadrature.hpp"

namespace ltq {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Relative half-width of the band around mu = rc where the closed form is
// routed to quadrature instead of the amplified (mu/(mu-rc))^{n+1} terms.
constexpr double kPoleBand = 1e-6;

// Two-piece defining integral of B_n(d); used off the closed form's
// reliable region. The CARA exponential is folded into the density in log
// space: u(w) pdf = (pdf - e^{-r w + ln pdf}) / r stays finite where the
// naive product would produce inf * 0. The integrand decays like
// x^n e^{-v x} past d, so the window is sized on the late-cost tilt rate.
double utility_by_quadrature(const Scenario& s, int state, double d) {
  const int n = state;
  const double mu = s.service_rate;
  const double r = s.risk_aversion;
  const double Rp = s.service_value - s.entrance_fee;
  const double c = s.delay_cost_rate;
  const double l = s.compensation_rate;

  auto log_pdf = [&](double x) {
    if (x <= 0.0) return n == 0 ? std::log(mu) : -std::numeric_limits<double>::infinity();
    return std::log(mu) - mu * x + n * std::log(mu * x) - std::lgamma(n + 1.0);
  };
  auto term = [&](double wealth, double x) {
    const double lp = log_pdf(x);
    const double tilted = std::min(-r * wealth + lp, 690.0);
    return (std::exp(lp) - std::exp(tilted)) / r;
  };

  const double early =
      integrate([&](double x) { return term(Rp - c * x, x); }, 0.0, d, 1e-11);

  const double v = s.tilted_rate_late_cost();
  const double window = 40.0 * (n + 1) / std::min(mu, v);
  const double late = integrate(
      [&](double x) { return term(Rp - (c - l) * x - l * d, x); }, d, d + window, 1e-11);
  return early + late;
}

// First closed-form piece: e^{-r(R-p)} * integral_0^d e^{rcx} f_{n,mu}(x) dx,
// equal to (mu/a)^{n+1} (1 - K1(a, d)) with a = mu - rc. Away from the pole
// with a > 0 this is a product of positives via the Erlang CDF. Through the
// pole band and for a <= 0 the same quantity is the all-positive series
//   mu^{n+1} d^{n+1}/n! * sum_j (-a d)^j / (j! (n+j+1)),
// whose leading term is the exact mu = rc limit (mu d)^{n+1}/(n+1)!.
// Returns false only when even the series overflows; quadrature runs then.
bool early_piece(const Scenario& s, int n, double d, double* out) {
  const double mu = s.service_rate;
  const double a = s.tilted_rate_full_cost();

  if (a > kPoleBand * mu) {
    const double amp = std::exp((n + 1) * std::log(mu / a));
    if (std::isfinite(amp)) {
      *out = amp * erlang_cdf({n + 1, a}, d);
      return true;
    }
    // Amplification overflow only happens hard against the band edge;
    // fall through to the series, which does not split the two factors.
  }

  if (d == 0.0) {
    *out = 0.0;
    return true;
  }
  const double z = -a * d;
  if (z > 690.0) return false;  // e^{|a|d}-sized series would overflow
  double u = 1.0;
  double sum = 1.0 / (n + 1);
  for (int j = 1; j < 100000; ++j) {
    u *= z / j;
    const double term = u / (n + j + 1);
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum) && j > z) break;
  }
  if (!(sum > 0.0)) return false;  // alternating fall-through lost its digits
  const double log_front = (n + 1) * std::log(mu * d) - std::lgamma(n + 1.0);
  if (log_front + std::log(sum) > 705.0) {
    *out = std::numeric_limits<double>::infinity();  // utility is -inf scale
    return true;
  }
  *out = std::exp(log_front) * sum;
  return true;
}

}  // namespace

UtilityEval expected_utility(const Scenario& s, int state, double quote) {
  if (state < 0) throw std::invalid_argument("expected_utility: state must be >= 0");
  if (!(quote >= 0.0)) throw std::invalid_argument("expected_utility: quote must be >= 0");
  if (!s.feasible_service()) return {kNegInf, EvalMethod::closed_form};

  const int n = state;
  const double mu = s.service_rate;
  const double r = s.risk_aversion;
  const double Rp = s.service_value - s.entrance_fee;

  if (r == 0.0) {
    const double value = Rp - s.delay_cost_rate * (n + 1) / mu +
                         s.compensation_rate * expected_lateness(s, n, quote);
    return {value, EvalMethod::closed_form};
  }

  const double a = s.tilted_rate_full_cost();
  if (quote == kInfiniteQuote) {
    if (a <= 0.0) return {kNegInf, EvalMethod::closed_form};
    const double log_term = -r * Rp + (n + 1) * std::log(mu / a);
    const double value = log_term > 700.0 ? kNegInf : (1.0 - std::exp(log_term)) / r;
    return {value, EvalMethod::closed_form};
  }

  double early;
  if (!early_piece(s, n, quote, &early)) {
    return {utility_by_quadrature(s, n, quote), EvalMethod::quadrature_fallback};
  }
  const double v = s.tilted_rate_late_cost();
  const double late = std::exp((n + 1) * std::log(mu / v) + r * s.compensation_rate * quote) *
                      erlang_tail({n + 1, v}, quote);
  const double value = (1.0 - std::exp(-r * Rp) * (early + late)) / r;
  return {value, EvalMethod::closed_form};
}

double expected_lateness(const Scenario& s, int state, double quote) {
  if (state < 0) throw std::invalid_argument("expected_lateness: state must be >= 0");
  if (quote == kInfiniteQuote) return 0.0;
  return expected_excess({state + 1, s.service_rate}, quote);
}

double entrant_profit(const Scenario& s, int state, double quote) {
  if (expected_utility(s, state, quote).value < 0.0) return 0.0;
  return s.entrance_fee - s.compensation_rate * expected_lateness(s, state, quote);
}

NaorThresholds naor_thresholds(const Scenario& s) {
  const double gain = s.service_rate * (s.service_value - s.entrance_fee);
  const int lower = static_cast<int>(std::floor(gain / s.delay_cost_rate + 1e-9));
  if (s.compensation_rate >= s.delay_cost_rate) return {lower, kUnboundedThreshold};
  const int upper = static_cast<int>(
      std::floor(gain / (s.delay_cost_rate - s.compensation_rate) + 1e-9));
  return {lower, upper};
}

}  // namespace ltq
