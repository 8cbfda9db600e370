#include "suris/elliptic.hpp"

#include <cmath>

#include "suris/errors.hpp"
#include "suris/numerics.hpp"

namespace suris {

double carlson_rf(double x, double y, double z) {
  if (x < 0 || y < 0 || z < 0 || (x + y) <= 0 || (y + z) <= 0 || (z + x) <= 0)
    throw DomainError("carlson_rf: arguments out of range");
  // Duplication until the arguments are nearly equal, then the degree-5
  // Taylor tail about the mean (Carlson 1995).
  double A0 = (x + y + z) / 3.0;
  double X = x, Y = y, Z = z;
  double A = A0;
  const double Q = std::pow(3.0 * 1e-18, -1.0 / 8.0) *
                   std::max({std::fabs(A0 - x), std::fabs(A0 - y), std::fabs(A0 - z)});
  double scale = 1.0;
  while (scale * Q > std::fabs(A)) {
    const double sx = std::sqrt(X), sy = std::sqrt(Y), sz = std::sqrt(Z);
    const double lambda = sx * sy + sy * sz + sz * sx;
    X = 0.25 * (X + lambda);
    Y = 0.25 * (Y + lambda);
    Z = 0.25 * (Z + lambda);
    A = 0.25 * (A + lambda);
    scale *= 0.25;
  }
  const double dx = (A0 - x) * scale / A;
  const double dy = (A0 - y) * scale / A;
  const double dz = -(dx + dy);
  const double E2 = dx * dy - dz * dz;
  const double E3 = dx * dy * dz;
  return (1.0 - E2 / 10.0 + E3 / 14.0 + E2 * E2 / 24.0 - 3.0 * E2 * E3 / 44.0) /
         std::sqrt(A);
}

double elliptic_K(double k) {
  if (!(std::fabs(k) < 1.0)) throw DomainError("elliptic_K: need |k| < 1");
  // AGM: K = pi / (2 agm(1, k')).
  double a = 1.0;
  double b = std::sqrt(1.0 - k * k);
  for (int i = 0; i < 64 && std::fabs(a - b) > 1e-17 * a; ++i) {
    const double am = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = am;
  }
  return num::kPi / (2.0 * a);
}

double elliptic_F(double phi, double k) {
  if (!(std::fabs(k) < 1.0)) throw DomainError("elliptic_F: need |k| < 1");
  // Reduce to |phi_r| <= pi/2: F(phi + n*pi) = 2nK + F(phi_r).
  const double n = std::nearbyint(phi / num::kPi);
  const double phir = phi - n * num::kPi;
  double f = 0.0;
  if (phir != 0.0) {
    const double s = std::sin(phir), c = std::cos(phir);
    f = s * carlson_rf(c * c, 1.0 - k * k * s * s, 1.0);
  }
  if (n != 0.0) f += 2.0 * n * elliptic_K(k);
  return f;
}

}  // namespace suris
