#pragma once

// Independent numerical oracles for the unit tests: adaptive Simpson
// quadrature and high-order central differences.  Deliberately written
// against the plain definitions, sharing no code with the library's own
// quadrature/differencing paths, so agreement is meaningful.
//
// High-precision reference literals quoted in the tests were produced by
// tests/oracle_gen.py (mpmath 1.3.0 at 50 significant digits) and frozen.

#include <cmath>
#include <functional>
#include <stdexcept>

namespace oracle {

using Fn = std::function<double(double)>;

namespace detail {

inline double simpson(double a, double fa, double b, double fb, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double adaptive(const Fn& f, double a, double fa, double b, double fb,
                       double m, double fm, double whole, double tol,
                       int depth) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson(a, fa, m, fm, flm);
  const double right = simpson(m, fm, b, fb, frm);
  if (depth <= 0) throw std::runtime_error("oracle::integrate: depth exhausted");
  if (std::fabs(left + right - whole) <= 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         adaptive(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

/// Adaptive Simpson with Richardson correction; absolute tolerance.
inline double integrate(const Fn& f, double a, double b, double tol = 5e-12) {
  const double m = 0.5 * (a + b);
  const double fa = f(a), fb = f(b), fm = f(m);
  const double whole = detail::simpson(a, fa, b, fb, fm);
  return detail::adaptive(f, a, fa, b, fb, m, fm, whole, tol, 48);
}

/// Five-point central difference, O(h^4).
inline double derivative(const Fn& f, double x, double h = 1e-4) {
  return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) /
         (12.0 * h);
}

/// Five-point second derivative, O(h^4).
inline double second_derivative(const Fn& f, double x, double h = 1e-3) {
  return (-f(x + 2 * h) + 16 * f(x + h) - 30 * f(x) + 16 * f(x - h) -
          f(x - 2 * h)) /
         (12.0 * h * h);
}

/// max_{i<n} |f(i/n)|.
inline double sup_on_grid(const Fn& f, int n = 4096) {
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    worst = std::max(worst, std::fabs(f(static_cast<double>(i) / n)));
  return worst;
}

}  // namespace oracle
