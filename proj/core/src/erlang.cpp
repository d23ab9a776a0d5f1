#include "ltq/erlang.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace ltq {

namespace {

void check_spec(const ErlangSpec& spec) {
  if (spec.shape < 1) throw std::invalid_argument("ErlangSpec: shape must be >= 1");
  if (!(spec.rate > 0.0)) throw std::invalid_argument("ErlangSpec: rate must be > 0");
}

// sum_{k < shape} e^{-ax} (ax)^k / k! for ax >= 0, scaled so no term
// overflows. Falls back to log-space terms if e^{-ax} underflows.
double poisson_cdf_scaled(int shape, double ax) {
  if (ax == 0.0) return 1.0;
  double term = std::exp(-ax);
  if (term > 0.0) {
    double sum = term;
    for (int k = 1; k < shape; ++k) {
      term *= ax / k;
      sum += term;
    }
    return sum < 1.0 ? sum : 1.0;
  }
  // ax > ~745: individual terms only representable in log space.
  double sum = 0.0;
  for (int k = 0; k < shape; ++k) {
    sum += std::exp(-ax + k * std::log(ax) - std::lgamma(k + 1.0));
  }
  return sum < 1.0 ? sum : 1.0;
}

}  // namespace

double erlang_tail(const ErlangSpec& spec, double x) {
  check_spec(spec);
  if (x < 0.0) throw std::domain_error("erlang_tail: x must be >= 0");
  return poisson_cdf_scaled(spec.shape, spec.rate * x);
}

double erlang_cdf(const ErlangSpec& spec, double x) {
  check_spec(spec);
  if (x < 0.0) throw std::domain_error("erlang_cdf: x must be >= 0");
  const double ax = spec.rate * x;
  const double tail = poisson_cdf_scaled(spec.shape, ax);
  if (tail <= 0.5) return 1.0 - tail;
  // Tail near 1: sum the upper Poisson series directly.
  double logt = -ax + spec.shape * std::log(ax) - std::lgamma(spec.shape + 1.0);
  double term = std::exp(logt);
  double sum = 0.0;
  for (int k = spec.shape; term > 0.0; ++k) {
    sum += term;
    term *= ax / (k + 1);
    if (term < sum * 1e-18 && k > ax) break;
  }
  return sum;
}

double erlang_pdf(const ErlangSpec& spec, double x) {
  check_spec(spec);
  if (x < 0.0) throw std::domain_error("erlang_pdf: x must be >= 0");
  if (x == 0.0) return spec.shape == 1 ? spec.rate : 0.0;
  const double ax = spec.rate * x;
  const double logf = std::log(spec.rate) - ax + (spec.shape - 1) * std::log(ax) -
                      std::lgamma(static_cast<double>(spec.shape));
  return std::exp(logf);
}

SignedTailSum poisson_tail_sum_signed(int shape, double a, double x) {
  if (shape < 1) throw std::invalid_argument("poisson_tail_sum_signed: shape must be >= 1");
  if (x < 0.0) throw std::domain_error("poisson_tail_sum_signed: x must be >= 0");
  const double ax = a * x;
  SignedTailSum out;
  if (ax >= 0.0) {
    out.value = poisson_cdf_scaled(shape, ax);
    return out;
  }
  // Alternating series; track the unsigned mass for the cancellation ratio.
  double term = 1.0, sum = 1.0, abs_sum = 1.0;
  for (int k = 1; k < shape; ++k) {
    term *= ax / k;
    sum += term;
    abs_sum += std::abs(term);
  }
  const double scale = std::exp(-ax);  // e^{|a|x}, grows with |ax|
  out.value = scale * sum;
  out.cancellation = sum == 0.0 ? std::numeric_limits<double>::infinity()
                                : abs_sum / std::abs(sum);
  out.precision_ok = std::isfinite(out.value) && out.cancellation <= kSignedSumCancellationBound;
  return out;
}

double expected_excess(const ErlangSpec& spec, double d) {
  check_spec(spec);
  if (d < 0.0) throw std::domain_error("expected_excess: d must be >= 0");
  const double mean = spec.shape / spec.rate;
  const double value = mean * erlang_tail({spec.shape + 1, spec.rate}, d) -
                       d * erlang_tail(spec, d);
  return value > 0.0 ? value : 0.0;
}

double geom_sum(double ratio, int count) {
  if (count < 0) throw std::invalid_argument("geom_sum: count must be >= 0");
  double sum = 0.0, pow = 1.0;
  for (int k = 0; k < count; ++k) {
    sum += pow;
    pow *= ratio;
  }
  return sum;
}

}  // namespace ltq
