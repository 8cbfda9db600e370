#include "suris/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace suris::num {

double wrap_unit(double x) {
  double r = x - std::floor(x);
  if (r >= 1.0) r -= 1.0;  // guards against floor rounding at negative ulps
  return r;
}

namespace {

// x reduced to [-0.5, 0.5), exactly.  Half-integers are mapped to -0.5
// unconditionally (nearbyint's round-half-to-even would otherwise send
// x = 0.5 and x = 1.5 to opposite endpoints, breaking bitwise periodicity).
double wrap_half(double x) {
  double r = x - std::nearbyint(x);
  if (r == 0.5) r = -0.5;
  return r;
}

}  // namespace

double sin2pi(double x) { return std::sin(kTwoPi * wrap_half(x)); }

double cos2pi(double x) { return std::cos(kTwoPi * wrap_half(x)); }

CumulativeTable::CumulativeTable(const std::function<double(double)>& f, int cells) {
  if (cells < 2) throw std::invalid_argument("CumulativeTable: need at least 2 cells");
  const int n = cells;
  const double h = 1.0 / n;
  slope_.resize(n + 1);
  cum_.resize(n + 1);
  for (int i = 0; i <= n; ++i) slope_[i] = f(i * h);
  KahanSum acc;
  cum_[0] = 0.0;
  for (int i = 0; i < n; ++i) {
    const double fm = f((i + 0.5) * h);
    acc.add(h / 6.0 * (slope_[i] + 4.0 * fm + slope_[i + 1]));
    cum_[i + 1] = acc.value();
  }
}

double CumulativeTable::eval(double x) const {
  const int n = cells();
  if (n == 0) return 0.0;
  x = std::clamp(x, 0.0, 1.0);
  int i = std::min(static_cast<int>(x * n), n - 1);
  const double h = 1.0 / n;
  const double t = (x - i * h) / h;  // in [0,1]
  const double t2 = t * t, t3 = t2 * t;
  // Cubic Hermite basis on [0,1] scaled by the cell width for the slopes.
  const double h00 = 2 * t3 - 3 * t2 + 1;
  const double h10 = t3 - 2 * t2 + t;
  const double h01 = -2 * t3 + 3 * t2;
  const double h11 = t3 - t2;
  return h00 * cum_[i] + h * h10 * slope_[i] + h01 * cum_[i + 1] + h * h11 * slope_[i + 1];
}

double CumulativeTable::eval_prime(double x) const {
  const int n = cells();
  if (n == 0) return 0.0;
  x = std::clamp(x, 0.0, 1.0);
  int i = std::min(static_cast<int>(x * n), n - 1);
  const double h = 1.0 / n;
  const double t = (x - i * h) / h;
  const double t2 = t * t;
  const double dh00 = (6 * t2 - 6 * t) / h;
  const double dh10 = 3 * t2 - 4 * t + 1;
  const double dh01 = (-6 * t2 + 6 * t) / h;
  const double dh11 = 3 * t2 - 2 * t;
  return dh00 * cum_[i] + dh10 * slope_[i] + dh01 * cum_[i + 1] + dh11 * slope_[i + 1];
}

std::vector<double> solve_tridiagonal(const std::vector<double>& a,
                                      const std::vector<double>& b,
                                      const std::vector<double>& c,
                                      std::vector<double> d) {
  const std::size_t n = b.size();
  if (n == 0) return {};
  std::vector<double> cp(n, 0.0);
  cp[0] = (n > 1 ? c[0] / b[0] : 0.0);
  d[0] /= b[0];
  for (std::size_t i = 1; i < n; ++i) {
    const double m = b[i] - a[i] * cp[i - 1];
    if (i + 1 < n) cp[i] = c[i] / m;
    d[i] = (d[i] - a[i] * d[i - 1]) / m;
  }
  for (std::size_t i = n - 1; i-- > 0;) d[i] -= cp[i] * d[i + 1];
  return d;
}

PowerLawFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("fit_loglog: need >= 2 matching samples");
  const std::size_t n = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0))
      throw std::invalid_argument("fit_loglog: samples must be positive");
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    syy += ly * ly;
  }
  const double den = n * sxx - sx * sx;
  PowerLawFit fit;
  fit.slope = (n * sxy - sx * sy) / den;
  fit.intercept = (sy - fit.slope * sx) / n;
  const double ss_tot = syy - sy * sy / n;
  double ss_res = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = std::log(y[i]) - (fit.slope * std::log(x[i]) + fit.intercept);
    ss_res += r * r;
  }
  fit.r_squared = (ss_tot > 0) ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

double refine_maximum(const std::function<double(double)>& f, double x0, double h,
                      int iterations) {
  const double inv_phi = 0.6180339887498948482;
  double a = x0 - h, b = x0 + h;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < iterations && (b - a) > 1e-15; ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace suris::num
