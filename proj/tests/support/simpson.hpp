#pragma once

#include <cmath>

namespace ltq::test {

// Adaptive Simpson quadrature. Deliberately a different scheme from the
// library's Gauss-Kronrod integrator so the two can cross-check each other.
namespace detail {

template <class F>
double simpson_rec(F& f, double a, double b, double fa, double fm, double fb, double whole,
                   double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  // Stop on the requested tolerance, the roundoff floor of the current
  // panel magnitude, or unresolvable subdivision.
  const double floor = 1e-14 * (std::abs(left) + std::abs(right));
  if (depth >= 40 || !(std::abs(delta) > 15.0 * tol) || std::abs(delta) <= floor) {
    return left + right + delta / 15.0;
  }
  return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
         simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
}

}  // namespace detail

// An initial fixed partition keeps sharply-peaked integrands from hiding
// between the first coarse probes (all-zero samples would otherwise look
// converged immediately).
template <class F>
double integrate_simpson(F&& f, double a, double b, double tol) {
  if (!(b > a)) return 0.0;
  constexpr int kPanels = 24;
  const double h = (b - a) / kPanels;
  double total = 0.0;
  for (int i = 0; i < kPanels; ++i) {
    const double lo = a + i * h, hi = i + 1 == kPanels ? b : a + (i + 1) * h;
    const double m = 0.5 * (lo + hi);
    const double fa = f(lo), fm = f(m), fb = f(hi);
    const double whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
    total += detail::simpson_rec(f, lo, hi, fa, fm, fb, whole, tol / kPanels, 0);
  }
  return total;
}

}  // namespace ltq::test
