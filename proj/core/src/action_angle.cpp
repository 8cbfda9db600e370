#include "suris/action_angle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "suris/errors.hpp"

namespace suris {

double action_variable(const SurisParams& p, double eta) {
  constexpr int kNodes = 2048;
  num::KahanSum acc;
  for (int i = 0; i < kNodes; ++i) {
    const double x = static_cast<double>(i) / kNodes;
    const auto h = alpha_beta_gamma_d(p, x);
    const double arg = (h.gamma - eta) / h.D;
    if (std::fabs(arg) > 1.0 + 1e-12) {
      std::ostringstream os;
      os << "action_variable: level eta=" << eta << " does not project over x=" << x;
      throw DomainError(os.str());
    }
    acc.add(std::acos(std::clamp(arg, -1.0, 1.0)));
  }
  return acc.value() / (num::kTwoPi * kNodes);
}

double chart_density(const SurisParams& p, double eta, double x) {
  const auto h = alpha_beta_gamma_d(p, x);
  const double rad = h.eta_radicand(eta);
  if (!(rad > 0.0)) {
    std::ostringstream os;
    os << "chart density singular at x=" << x << " (level eta=" << eta
       << " tangent to the envelope)";
    throw NotAttainableError(os.str());
  }
  return 1.0 / std::sqrt(rad);
}

AngleChart::AngleChart(const InvariantCurve& curve, int grid)
    : curve_(curve),
      grid_(grid),
      cum_(
          [&curve](double x) {
            return chart_density(curve.params(), curve.curve_params().eta, x);
          },
          grid) {
  norm_ = cum_.total();
  if (!(norm_ > 0.0)) throw DomainError("AngleChart: nonpositive density integral");
  const double x1 = curve_.psi(0.0) + curve_.potential().vprime(0.0);
  rho_ = theta(x1);
}

double AngleChart::theta(double x) const {
  const double fl = std::floor(x);
  return (cum_.eval(x - fl) + fl * norm_) / norm_;
}

double AngleChart::theta_prime(double x) const {
  return chart_density(curve_.params(), curve_.curve_params().eta, x) / norm_;
}

double AngleChart::x_of_theta(double t) const {
  const double fl = std::floor(t);
  const double target = (t - fl) * norm_;
  double a = 0.0, b = 1.0;
  while (b - a > 1e-15) {
    const double mid = 0.5 * (a + b);
    (cum_.eval(mid) < target ? a : b) = mid;
  }
  return fl + 0.5 * (a + b);
}

double AngleChart::conjugacy_defect(int samples) const {
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double x0 = static_cast<double>(i) / samples;
    const PhasePoint z1 = step(curve_.potential(), {x0, curve_.psi(x0)});
    double d = theta(z1.x) - theta(x0) - rho_;
    d -= std::nearbyint(d);
    worst = std::max(worst, std::fabs(d));
  }
  return worst;
}

AngleChart build_chart(const SurisParams& p, double rho, int grid) {
  return AngleChart(curve_for_rotation_number(p, rho), grid);
}

double elliptic_modulus_special(double eps, double eta) {
  if (!(eps >= 0.0 && eps <= 0.25))
    throw DomainError("special case requires 0 <= eps <= 1/4");
  const double denom = (1.0 + eps) * (1.0 + eps) - eta * eta;
  if (!(denom > 0.0) || !(4.0 * eps < denom))
    throw DomainError("special case requires |eta| < 1 - eps (modulus k < 1)");
  return std::sqrt(4.0 * eps / denom);
}

double theta_special(double eps, double eta, double x) {
  const double k = elliptic_modulus_special(eps, eta);
  return elliptic_F(num::kTwoPi * x, k) / (4.0 * elliptic_K(k));
}

double rotation_number_special(double eps, double eta) {
  const double k = elliptic_modulus_special(eps, eta);
  const double phi = std::acos(std::clamp(-eta / (1.0 + eps), -1.0, 1.0));
  return elliptic_F(phi, k) / (4.0 * elliptic_K(k));
}

namespace {

std::vector<double> chart_nodes(const AngleChart& chart, int grid) {
  std::vector<double> out(grid);
  for (int i = 0; i < grid; ++i) out[i] = chart.theta(static_cast<double>(i) / grid);
  return out;
}

}  // namespace

ExpansionTerms expansion_terms(const SurisParams& p, int grid) {
  ExpansionTerms out;
  out.grid = grid;
  out.step = 1e-3;

  const auto sampled = [&](double rho) {
    return chart_nodes(build_chart(p, rho, grid), grid);
  };

  out.theta_quarter = sampled(0.25);

  // Richardson-refined central difference in the label:
  // u = (4 D(h/2) - D(h)) / 3, D(h) = (theta_{1/4+h} - theta_{1/4-h}) / (2h).
  const double h = out.step;
  const auto tp_h = sampled(0.25 + h), tm_h = sampled(0.25 - h);
  const auto tp_h2 = sampled(0.25 + 0.5 * h), tm_h2 = sampled(0.25 - 0.5 * h);
  out.u.resize(grid);
  for (int i = 0; i < grid; ++i) {
    const double d_h = (tp_h[i] - tm_h[i]) / (2.0 * h);
    const double d_h2 = (tp_h2[i] - tm_h2[i]) / h;
    out.u[i] = (4.0 * d_h2 - d_h) / 3.0;
    out.max_u = std::max(out.max_u, std::fabs(out.u[i]));
  }

  out.labels = {0.25 - 0.05, 0.25 - 0.025, 0.25 - 0.0125,
                0.25 + 0.0125, 0.25 + 0.025, 0.25 + 0.05};
  out.v.reserve(out.labels.size());
  for (const double rho : out.labels) {
    const auto row = sampled(rho);
    std::vector<double> res(grid);
    double sup = 0.0;
    for (int i = 0; i < grid; ++i) {
      res[i] = row[i] - out.theta_quarter[i] - (rho - 0.25) * out.u[i];
      sup = std::max(sup, std::fabs(res[i]));
    }
    out.max_v_over_sq = std::max(out.max_v_over_sq, sup / ((rho - 0.25) * (rho - 0.25)));
    out.v.push_back(std::move(res));
  }
  return out;
}

}  // namespace suris
