#include "suris/map_dynamics.hpp"

#include <cmath>

#include "suris/errors.hpp"
#include "suris/numerics.hpp"

namespace suris {

using num::cos2pi;
using num::sin2pi;

PhasePoint step(const Potential& v, const PhasePoint& z) {
  const double vp = v.vprime(z.x);
  const double y1 = z.y + vp;
  return {z.x + y1, y1};
}

OrbitSegment iterate(const Potential& v, const PhasePoint& z, long n) {
  if (n < 0) throw DomainError("iterate: n >= 0 required");
  OrbitSegment seg;
  seg.potential_tag = v.describe();
  seg.points.reserve(static_cast<std::size_t>(n) + 1);
  seg.points.push_back(z);
  PhasePoint cur = z;
  for (long i = 0; i < n; ++i) {
    cur = step(v, cur);
    seg.points.push_back(cur);
  }
  return seg;
}

double generating_h(const Potential& v, double x1, double x2) {
  const double d = x2 - x1;
  return 0.5 * d * d + v.v(x1);
}

double fk_residual(const Potential& v, double xm, double x0, double xp) {
  return xp - 2.0 * x0 + xm - v.vprime(x0);
}

double first_integral(const SurisParams& p, const PhasePoint& z) {
  const double x = z.x, y = z.y;
  return -cos2pi(y) + p.A * (cos2pi(x) + cos2pi(x - y)) -
         p.B * (sin2pi(x) + sin2pi(x - y)) + p.C * cos2pi(2.0 * x - y) -
         p.D * sin2pi(2.0 * x - y);
}

double phi_form(const SurisParams& p, double x, double xprime) {
  return -cos2pi(xprime - x) + p.A * (cos2pi(xprime) + cos2pi(x)) -
         p.B * (sin2pi(xprime) + sin2pi(x)) + p.C * cos2pi(x + xprime) -
         p.D * sin2pi(x + xprime);
}

IntegralRange integral_range(const SurisParams& p) {
  constexpr int kGrid = 4096;
  auto upper = [&p](double x) {
    const auto h = alpha_beta_gamma_d(p, x);
    return h.gamma + h.D;
  };
  auto lower_neg = [&p](double x) {
    const auto h = alpha_beta_gamma_d(p, x);
    return h.D - h.gamma;  // maximize D - gamma  <=>  minimize gamma - D
  };
  double hi = -1e300, lo_arg = 0.0, hi_arg = 0.0, lo_best = -1e300;
  for (int i = 0; i < kGrid; ++i) {
    const double x = static_cast<double>(i) / kGrid;
    const auto h = alpha_beta_gamma_d(p, x);
    if (h.gamma + h.D > hi) {
      hi = h.gamma + h.D;
      hi_arg = x;
    }
    if (h.D - h.gamma > lo_best) {
      lo_best = h.D - h.gamma;
      lo_arg = x;
    }
  }
  const double h = 1.0 / kGrid;
  const double xhi = num::refine_maximum(upper, hi_arg, h);
  const double xlo = num::refine_maximum(lower_neg, lo_arg, h);
  const auto top = alpha_beta_gamma_d(p, xhi);
  const auto bot = alpha_beta_gamma_d(p, xlo);
  return {bot.gamma - bot.D, top.gamma + top.D};
}

}  // namespace suris
