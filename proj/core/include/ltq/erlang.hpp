#pragma once

#include <vector>

namespace ltq {

/// Erlang (integer-shape gamma) distribution: sum of `shape` i.i.d.
/// exponentials with the given rate.
struct ErlangSpec {
  int shape;    // number of stages, >= 1
  double rate;  // > 0 for any probabilistic use
};

/// P(X > x) for X ~ Erlang(shape, rate), evaluated through the Poisson
/// identity  F_bar(x) = sum_{k < shape} e^{-rate x} (rate x)^k / k!
/// with a scaled term recurrence (no factorials materialized).
double erlang_tail(const ErlangSpec& spec, double x);

/// P(X <= x), computed from the side that avoids cancellation: the upper
/// Poisson series when the tail is close to 1, the complement otherwise.
double erlang_cdf(const ErlangSpec& spec, double x);

/// Density of Erlang(shape, rate) at x.
double erlang_pdf(const ErlangSpec& spec, double x);

/// Analytic continuation of the Erlang tail sum to signed rate arguments:
///   e^{-a x} sum_{k < shape} (a x)^k / k!
/// For a > 0 this equals erlang_tail({shape, a}, x) term by term. For
/// a < 0 the series alternates; `cancellation` reports sum|t_k| / |sum t_k|
/// so callers can detect when the result has lost too many digits.
struct SignedTailSum {
  double value = 0.0;
  double cancellation = 1.0;
  bool precision_ok = true;
};

// Cancellation above this bound marks the signed sum as untrustworthy.
inline constexpr double kSignedSumCancellationBound = 1e8;

SignedTailSum poisson_tail_sum_signed(int shape, double a, double x);

/// E(X - d)^+ for X ~ Erlang(shape, rate):
///   (shape/rate) * F_bar_{shape+1}(d) - d * F_bar_{shape}(d).
/// Nonnegative, convex, decreasing in d; equals the mean at d = 0.
double expected_excess(const ErlangSpec& spec, double d);

/// sum_{k=0}^{count-1} ratio^k, exact at ratio == 1.
double geom_sum(double ratio, int count);

}  // namespace ltq
