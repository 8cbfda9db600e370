#pragma once

namespace suris {

/// Carlson's symmetric integral R_F(x,y,z), x,y,z >= 0 with at most one zero.
/// Duplication algorithm, ~1e-15 relative accuracy.
double carlson_rf(double x, double y, double z);

/// Complete elliptic integral of the first kind, Legendre modulus convention:
/// K(k) = int_0^{pi/2} dt / sqrt(1 - k^2 sin^2 t).  Computed by the
/// arithmetic-geometric mean.  Throws DomainError for |k| >= 1.
double elliptic_K(double k);

/// Incomplete elliptic integral of the first kind F(phi, k) =
/// int_0^phi dt / sqrt(1 - k^2 sin^2 t), for any real phi (periodic extension
/// F(phi + n*pi) = 2nK + F(phi)).  Carlson form on the reduced argument.
/// Throws DomainError for |k| >= 1.
double elliptic_F(double phi, double k);

}  // namespace suris
