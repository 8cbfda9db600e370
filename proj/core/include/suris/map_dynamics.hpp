#pragma once

#include <string>
#include <vector>

#include "suris/potentials.hpp"

namespace suris {

/// A point of the cylinder in lift coordinates: x is a point of the real
/// line (never implicitly reduced), y the momentum/angle increment.
struct PhasePoint {
  double x = 0.0;
  double y = 0.0;
};

/// A finite orbit of the standard map, densely stored, together with the
/// identity tag of the generating potential.
struct OrbitSegment {
  std::vector<PhasePoint> points;
  std::string potential_tag;
};

/// One application of the standard map
///   (x, y) -> (x + y + V'(x), y + V'(x)).
PhasePoint step(const Potential& v, const PhasePoint& z);

/// n applications of step; returns the segment [z, F(z), ..., F^n(z)]
/// of length n+1.
OrbitSegment iterate(const Potential& v, const PhasePoint& z, long n);

/// Generating function H_V(x1, x2) = (x2-x1)^2/2 + V(x1).
double generating_h(const Potential& v, double x1, double x2);

/// Second-difference residual xp - 2*x0 + xm - V'(x0); zero iff the triple
/// extends to an orbit x-projection.
double fk_residual(const Potential& v, double xm, double x0, double xp);

/// The first integral
///   I(x,y) = -cos(2 pi y) + A [cos(2 pi x) + cos(2 pi (x-y))]
///            - B [sin(2 pi x) + sin(2 pi (x-y))]
///            + C cos(2 pi (2x-y)) - D sin(2 pi (2x-y));
/// constant along orbits of the Suris map, 1-periodic in x and y.
double first_integral(const SurisParams& p, const PhasePoint& z);

/// The two-point form Phi(x, x') with Phi(x_n, x_{n+1}) = I(x_{n+1}, y_{n+1});
/// cross-check companion of first_integral.
double phi_form(const SurisParams& p, double x, double xprime);

/// Range of the first integral over the cylinder:
///   Ilo = min_x [gamma(x) - D(x)],  Ihi = max_x [gamma(x) + D(x)],
/// computed on a fine grid with local golden-section refinement.
struct IntegralRange {
  double lo;
  double hi;
};
IntegralRange integral_range(const SurisParams& p);

}  // namespace suris
