#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace suris::num {

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kTwoPi = 2.0 * kPi;

/// x reduced to [0, 1).
double wrap_unit(double x);

/// sin(2*pi*x) / cos(2*pi*x) with the argument reduced first, so that the
/// result is exactly 1-periodic in floating point (f(x+1) is bitwise f(x)
/// whenever x+1 is exact).
double sin2pi(double x);
double cos2pi(double x);

/// Compensated (Kahan) accumulator; keeps long reductions deterministic and
/// accurate independent of length.
class KahanSum {
 public:
  void add(double term) {
    const double y = term - c_;
    const double t = s_ + y;
    c_ = (t - s_) - y;
    s_ = t;
  }
  double value() const { return s_; }

 private:
  double s_ = 0.0;
  double c_ = 0.0;
};

/// Cumulative integral table of a smooth function f on [0,1].
///
/// Per-cell composite Simpson builds I(x_i) = int_0^{x_i} f on n+1 equispaced
/// nodes (O(h^4) accumulated error); evaluation between nodes uses the cubic
/// Hermite interpolant of I with the exact slopes I'(x_i) = f(x_i), so the
/// interpolation error is of the same O(h^4) order and eval_prime is exact.
class CumulativeTable {
 public:
  CumulativeTable() = default;
  CumulativeTable(const std::function<double(double)>& f, int cells);

  /// I(x) for x in [0,1]; arguments outside are clamped (callers handle
  /// periodic/quasi-periodic extension explicitly).
  double eval(double x) const;
  /// I'(x) = f at the tabulated slope nodes (Hermite-consistent).
  double eval_prime(double x) const;
  /// Total integral I(1).
  double total() const { return cum_.empty() ? 0.0 : cum_.back(); }

  int cells() const { return static_cast<int>(slope_.empty() ? 0 : slope_.size() - 1); }
  const std::vector<double>& node_values() const { return cum_; }
  const std::vector<double>& node_slopes() const { return slope_; }

 private:
  std::vector<double> cum_;    // I at nodes i/n, i = 0..n
  std::vector<double> slope_;  // f at nodes
};

/// Solves the tridiagonal system with sub-diagonal a (a[i] multiplies
/// x[i-1] in row i), diagonal b, super-diagonal c (c[i] multiplies x[i+1]),
/// right-hand side d.  Returns the solution; does not pivot (callers supply
/// diagonally dominant / definite systems).
std::vector<double> solve_tridiagonal(const std::vector<double>& a,
                                      const std::vector<double>& b,
                                      const std::vector<double>& c,
                                      std::vector<double> d);

/// Least-squares fit of log(y) = slope*log(x) + intercept.
struct PowerLawFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};
PowerLawFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

/// Refines a local maximum of f near x0 (bracket half-width h) by golden
/// section; returns the refined argmax.  Used to sharpen grid scans of smooth
/// periodic functions.
double refine_maximum(const std::function<double(double)>& f, double x0, double h,
                      int iterations = 80);

}  // namespace suris::num
