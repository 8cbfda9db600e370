#pragma once

#include <vector>

#include "suris/map_dynamics.hpp"
#include "suris/potentials.hpp"

namespace suris {

/// Label of one invariant graph: level eta of the first integral, branch
/// sigma = +-1 of the arccos, and integer sheet k.
struct CurveParams {
  double eta = 0.0;
  int sigma = +1;
  int k = 0;
};

/// y-value of the graph
///   psi(x) = (sigma/2pi) arccos((gamma(x) - eta)/D(x)) - V'(x)/2 + k.
/// The arccos argument is clamped when within 1e-12 of [-1,1]; beyond that a
/// DomainError is thrown (the level does not project over x).
double psi_value(const SurisParams& p, const CurveParams& c, double x);

/// Levels eta for which the graph projects over the whole circle:
///   [ max_x (gamma - D), min_x (gamma + D) ].
struct LevelWindow {
  double lo;
  double hi;
};
LevelWindow projection_window(const SurisParams& p);

/// An invariant graph of the Suris map, validated and tabulated on a
/// 2048-point grid at construction.  Immutable afterwards.
class InvariantCurve {
 public:
  InvariantCurve(const SurisParams& p, const CurveParams& c, int grid = 2048);

  double psi(double x) const { return psi_value(params_, curve_, x); }
  const SurisParams& params() const { return params_; }
  const CurveParams& curve_params() const { return curve_; }
  const Potential& potential() const { return potential_; }
  const std::vector<double>& table() const { return table_; }
  int grid() const { return static_cast<int>(table_.size()); }

  /// max over sampled x of |y1 - psi(x1)| where (x1,y1) = F(x, psi(x));
  /// the dynamical-invariance defect.
  double invariance_residual(int samples = 256) const;
  /// max over sampled x of |I(x, psi(x)) - eta|; the level-set defect.
  double level_residual(int samples = 256) const;

 private:
  SurisParams params_;
  CurveParams curve_;
  Potential potential_;
  std::vector<double> table_;
};

/// Birkhoff rotation-number estimate (x_n - x_0)/n for the orbit started at
/// (0, psi(0)).  Requires n >= 1000; error O(1/n) for irrational rotation
/// numbers, exact up to rounding when n is a multiple of the period.
double rotation_number_on_curve(const InvariantCurve& c, long n);

/// The n- and 2n-step Birkhoff estimates in one pass (the pair brackets the
/// O(1/n) uncertainty).
struct RotationEstimates {
  double at_n;
  double at_2n;
};
RotationEstimates rotation_number_pair(const InvariantCurve& c, long n);

/// Rotation number of the graph at level eta via the angle-advance
/// quadrature: the chart density w = 1/sqrt(D^2 - (eta-gamma)^2) conjugates
/// the restricted map to the rigid rotation, so
///   omega = int_0^{x_1} w / int_0^1 w,   x_1 = psi(0) + V'(0).
/// Accuracy ~1e-12 (cumulative-Simpson tables); used by the curve solver.
double rotation_number_exact(const SurisParams& p, const CurveParams& c);

/// Finds the invariant curve of rotation number rho on branch (sigma, k):
/// 64-point bracketing scan over the admissible eta window followed by
/// bisection to 1e-12 in eta (omega is strictly monotone in eta on a branch
/// by the twist property).  Throws NotAttainable if rho lies outside the
/// branch's measured window, NonMonotone if the scan is inconsistent.
InvariantCurve curve_for_rotation_number(const SurisParams& p, double rho,
                                         int sigma = +1, int k = 0);

}  // namespace suris
