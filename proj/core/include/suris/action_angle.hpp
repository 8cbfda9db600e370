#pragma once

#include <vector>

#include "suris/elliptic.hpp"
#include "suris/invariant_geometry.hpp"
#include "suris/numerics.hpp"
#include "suris/potentials.hpp"

namespace suris {

/// Action variable of the level {I = eta}:
///   Omega(eta) = (1/2pi) int_0^1 arccos((gamma(x) - eta)/D(x)) dx,
/// by the 2048-node periodic trapezoid rule (spectrally accurate).  At
/// eccentricity 0 this reduces to arccos(-eta)/(2pi), the rotation number.
double action_variable(const SurisParams& p, double eta);

/// Unnormalized chart density w(x) = 1/sqrt(D(x)^2 - (eta - gamma(x))^2);
/// theta' is w divided by its integral over one period.  Throws
/// NotAttainable when the level is tangent to (or misses) the envelope at x.
double chart_density(const SurisParams& p, double eta, double x);

/// Angle coordinate on one invariant curve: the normalized cumulative of the
/// chart density, theta(0) = 0, theta(1) = 1, extended by theta(x+1) =
/// theta(x) + 1.  In this coordinate the restricted map is the rigid
/// rotation by the curve's rotation number.
class AngleChart {
 public:
  /// Builds the chart over an already-constructed curve; `grid` is the
  /// number of quadrature cells of the cumulative table (and therefore the
  /// resolution at which theta is exact to O(grid^-4)).
  explicit AngleChart(const InvariantCurve& curve, int grid = 2048);

  /// theta(x); quasi-periodic lift.
  double theta(double x) const;
  /// theta'(x), evaluated from the closed-form density (exact, no table).
  double theta_prime(double x) const;
  /// Inverse chart: x such that theta(x) = t, with the same lift convention.
  double x_of_theta(double t) const;

  /// Rotation number measured from the chart itself: theta(F(0, psi(0))).
  double rho() const { return rho_; }
  double eta() const { return curve_.curve_params().eta; }
  const SurisParams& params() const { return curve_.params(); }
  const InvariantCurve& curve() const { return curve_; }
  int grid() const { return grid_; }

  /// max over `samples` seeds x0 of the circle distance
  /// |theta(x1) - theta(x0) - rho| where x1 is the image of x0 under the
  /// restricted map; zero exactly when theta conjugates the restricted map
  /// to the rigid rotation by rho.
  double conjugacy_defect(int samples = 256) const;

 private:
  InvariantCurve curve_;
  int grid_;
  num::CumulativeTable cum_;
  double norm_ = 1.0;
  double rho_ = 0.0;
};

/// Solves for the invariant curve of rotation number rho (branch sigma=+1,
/// sheet k=0) and charts it.
AngleChart build_chart(const SurisParams& p, double rho, int grid = 2048);

/// --- Special case A = B = D = 0, C = -eps (V' odd) -------------------------
/// Here D(x) = sqrt(1 + eps^2 + 2 eps cos 4 pi x) and everything reduces to
/// Legendre elliptic integrals with modulus
///   k(eta) = sqrt(4 eps / ((1+eps)^2 - eta^2)),   valid for |eta| < 1 - eps.
double elliptic_modulus_special(double eps, double eta);
/// theta(x) on the level {I = eta}:  F(2 pi x, k)/(4 K(k)).
double theta_special(double eps, double eta, double x);
/// Rotation number of the level:  F(arccos(-eta/(1+eps)), k)/(4 K(k)).
double rotation_number_special(double eps, double eta);

/// First-order expansion of the chart family around the central curve:
///   theta_rho(x) = theta_{1/4}(x) + (rho - 1/4) u(x) + v(rho, x),
/// with u the Richardson-refined central difference of the family in its
/// rotation-number label (the family label used throughout; the action label
/// differs by the smooth reparameterization Omega(rho)) and v the residual,
/// tabulated at the sampled labels.
struct ExpansionTerms {
  int grid = 0;          // x-nodes are i/grid, i = 0..grid-1
  double step = 0.0;     // differencing step h in the label
  std::vector<double> theta_quarter;        // theta_{1/4} at the nodes
  std::vector<double> u;                    // d theta / d rho at rho = 1/4
  std::vector<double> labels;               // sampled rho values
  std::vector<std::vector<double>> v;       // v[j][i] residual at labels[j]
  double max_u = 0.0;                       // sup |u|
  double max_v_over_sq = 0.0;               // max_j sup_i |v|/(rho_j - 1/4)^2
};
ExpansionTerms expansion_terms(const SurisParams& p, int grid = 1024);

}  // namespace suris
