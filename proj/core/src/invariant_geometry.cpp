#include "suris/invariant_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "suris/errors.hpp"
#include "suris/numerics.hpp"

namespace suris {

namespace {

constexpr double kClampSlack = 1e-12;

double clamped_arccos_arg(const SurisParams& p, double eta, double x) {
  const auto h = alpha_beta_gamma_d(p, x);
  const double arg = (h.gamma - eta) / h.D;
  if (std::fabs(arg) > 1.0 + kClampSlack) {
    std::ostringstream os;
    os << "level eta=" << eta << " does not project over x=" << x
       << " (|arccos argument| = " << std::fabs(arg) << ")";
    throw DomainError(os.str());
  }
  return std::clamp(arg, -1.0, 1.0);
}

}  // namespace

double psi_value(const SurisParams& p, const CurveParams& c, double x) {
  // Solving eta = -alpha cos(2 pi y) + beta sin(2 pi y) + gamma with
  // cos(2 pi phi) = alpha/D, sin(2 pi phi) = beta/D gives
  // cos(2 pi (y + phi)) = (gamma - eta)/D and phi = V'/2, hence the minus
  // sign on the V'/2 term (the plus-sign variant fails dynamical invariance
  // by O(sup|V'|)).
  const double arg = clamped_arccos_arg(p, c.eta, x);
  return c.sigma * std::acos(arg) / num::kTwoPi - 0.5 * suris_vprime(p, x) + c.k;
}

LevelWindow projection_window(const SurisParams& p) {
  constexpr int kGrid = 4096;
  // lo = max_x (gamma - D): refine the max of (gamma - D);
  // hi = min_x (gamma + D): refine the max of -(gamma + D).
  auto lower_env = [&p](double x) {
    const auto h = alpha_beta_gamma_d(p, x);
    return h.gamma - h.D;
  };
  auto upper_env_neg = [&p](double x) {
    const auto h = alpha_beta_gamma_d(p, x);
    return -(h.gamma + h.D);
  };
  double best_lo = -1e300, arg_lo = 0.0, best_hi = -1e300, arg_hi = 0.0;
  for (int i = 0; i < kGrid; ++i) {
    const double x = static_cast<double>(i) / kGrid;
    const double a = lower_env(x);
    const double b = upper_env_neg(x);
    if (a > best_lo) {
      best_lo = a;
      arg_lo = x;
    }
    if (b > best_hi) {
      best_hi = b;
      arg_hi = x;
    }
  }
  const double h = 1.0 / kGrid;
  const double xlo = num::refine_maximum(lower_env, arg_lo, h);
  const double xhi = num::refine_maximum(upper_env_neg, arg_hi, h);
  return {lower_env(xlo), -upper_env_neg(xhi)};
}

InvariantCurve::InvariantCurve(const SurisParams& p, const CurveParams& c, int grid)
    : params_(p), curve_(c), potential_(Potential::suris(p)) {
  if (grid < 16) throw DomainError("InvariantCurve: grid too small");
  const IntegralRange range = integral_range(p);
  if (!(c.eta > range.lo && c.eta < range.hi))
    throw DomainError("InvariantCurve: eta outside the open range of the integral");
  if (c.sigma != +1 && c.sigma != -1)
    throw DomainError("InvariantCurve: sigma must be +1 or -1");
  table_.resize(grid);
  for (int i = 0; i < grid; ++i)
    table_[i] = psi_value(p, c, static_cast<double>(i) / grid);  // throws if invalid
}

double InvariantCurve::invariance_residual(int samples) const {
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double x = static_cast<double>(i) / samples;
    const PhasePoint img = step(potential_, {x, psi(x)});
    const double gap = std::fabs(img.y - psi(img.x));
    if (gap > worst) worst = gap;
  }
  return worst;
}

double InvariantCurve::level_residual(int samples) const {
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double x = static_cast<double>(i) / samples;
    const double gap = std::fabs(first_integral(params_, {x, psi(x)}) - curve_.eta);
    if (gap > worst) worst = gap;
  }
  return worst;
}

double rotation_number_on_curve(const InvariantCurve& c, long n) {
  if (n < 1000) throw DomainError("rotation_number_on_curve: n >= 1000 required");
  PhasePoint z{0.0, c.psi(0.0)};
  const double x0 = z.x;
  for (long i = 0; i < n; ++i) z = step(c.potential(), z);
  return (z.x - x0) / static_cast<double>(n);
}

RotationEstimates rotation_number_pair(const InvariantCurve& c, long n) {
  if (n < 1000) throw DomainError("rotation_number_pair: n >= 1000 required");
  PhasePoint z{0.0, c.psi(0.0)};
  const double x0 = z.x;
  double at_n = 0.0;
  for (long i = 1; i <= 2 * n; ++i) {
    z = step(c.potential(), z);
    if (i == n) at_n = (z.x - x0) / static_cast<double>(n);
  }
  return {at_n, (z.x - x0) / static_cast<double>(2 * n)};
}

double rotation_number_exact(const SurisParams& p, const CurveParams& c) {
  // Chart density w(x) = 1/sqrt(D^2 - (eta-gamma)^2); requires the level to
  // project strictly (positive radicand on the whole circle).
  auto w = [&](double x) {
    const auto h = alpha_beta_gamma_d(p, x);
    const double d = h.eta_radicand(c.eta);
    if (!(d > 0.0))
      throw NotAttainableError("rotation_number_exact: level tangent to the envelope");
    return 1.0 / std::sqrt(d);
  };
  const num::CumulativeTable tab(w, 4096);
  const double norm = tab.total();
  const double x1 = psi_value(p, c, 0.0) + suris_vprime(p, 0.0);
  const double fl = std::floor(x1);
  return (tab.eval(x1 - fl) + fl * norm) / norm;
}

InvariantCurve curve_for_rotation_number(const SurisParams& p, double rho, int sigma,
                                         int k) {
  const LevelWindow win = projection_window(p);
  // Working window: strictly inside the projection window and inside the
  // default |eta| <= 0.9 band where the graph regime is comfortably
  // non-degenerate.
  const double margin = 1e-6 * (win.hi - win.lo);
  const double lo = std::max(win.lo + margin, -0.9);
  const double hi = std::min(win.hi - margin, 0.9);
  if (!(lo < hi)) throw NotAttainableError("curve_for_rotation_number: empty eta window");

  auto omega = [&](double eta) {
    return rotation_number_exact(p, CurveParams{eta, sigma, k});
  };

  constexpr int kScan = 64;
  double prev_eta = lo, prev_om = omega(lo);
  const int dir = (sigma == +1) ? +1 : -1;  // omega increases in eta on sigma=+1
  double a = 0, b = 0, fa = 0, fb = 0;
  bool bracketed = false;
  double scan_min = prev_om, scan_max = prev_om;
  for (int i = 1; i <= kScan; ++i) {
    const double eta = lo + (hi - lo) * i / kScan;
    const double om = omega(eta);
    scan_min = std::min(scan_min, om);
    scan_max = std::max(scan_max, om);
    if (!bracketed && (prev_om - rho) * (om - rho) <= 0.0) {
      a = prev_eta;
      b = eta;
      fa = prev_om - rho;
      fb = om - rho;
      bracketed = true;
    }
    if (dir * (om - prev_om) < -1e-9)
      throw NonMonotoneError(
          "curve_for_rotation_number: rotation number not monotone in eta "
          "(eccentricity too large for the twist regime?)");
    prev_eta = eta;
    prev_om = om;
  }
  if (!bracketed) {
    std::ostringstream os;
    os << "curve_for_rotation_number: rho=" << rho << " outside the measured window ["
       << scan_min << ", " << scan_max << "] of branch (sigma=" << sigma << ", k=" << k
       << ")";
    throw NotAttainableError(os.str());
  }
  if (fa == 0.0) b = a;
  if (fb == 0.0) a = b;
  while (b - a > 1e-12) {
    const double mid = 0.5 * (a + b);
    const double fm = omega(mid) - rho;
    if ((fa <= 0.0 && fm <= 0.0) || (fa >= 0.0 && fm >= 0.0)) {
      a = mid;
      fa = fm;
    } else {
      b = mid;
    }
  }
  return InvariantCurve(p, CurveParams{0.5 * (a + b), sigma, k});
}

}  // namespace suris
