#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace suris {

/// Parameters (A,B,C,D) of a Suris potential with the frequency fixed at
/// 2*pi.  Construction enforces the eccentricity cap
/// eps = sqrt(A^2+B^2+C^2+D^2) <= 1/4, which keeps the arctan denominator
/// 1 + F(x) >= 1 - 2*eps > 0.
struct SurisParams {
  double A = 0.0;
  double B = 0.0;
  double C = 0.0;
  double D = 0.0;

  SurisParams() = default;
  SurisParams(double a, double b, double c, double d);

  double eccentricity() const;
  bool operator==(const SurisParams& o) const {
    return A == o.A && B == o.B && C == o.C && D == o.D;
  }
};

enum class SurisCoord { A, B, C, D };

/// The level-set helper functions of the first integral written as
/// I(x,y) = -alpha(x) cos(2*pi*y) + beta(x) sin(2*pi*y) + gamma(x),
/// with D = sqrt(alpha^2 + beta^2) >= 1 - 2*eps.
struct AlphaBetaGammaD {
  double alpha;
  double beta;
  double gamma;
  double D;

  /// D^2 - (eta - gamma)^2 in the cancellation-safe factored form; positive
  /// exactly when the level {I = eta} passes strictly over this x.
  double eta_radicand(double eta) const {
    return (D - (eta - gamma)) * (D + (eta - gamma));
  }
};
AlphaBetaGammaD alpha_beta_gamma_d(const SurisParams& p, double x);

/// V'(x) = (1/pi) * arctan(E(x) / (1 + F(x))); exactly 1-periodic.
double suris_vprime(const SurisParams& p, double x);
/// V''(x), closed form.
double suris_vsecond(const SurisParams& p, double x);
/// V(x) = int_0^x V'; quasi-periodic continuation V(x+1) = V(x) + V(1)
/// (V(1) vanishes identically for this family, but is computed, not assumed).
/// Cached-table backed; absolute accuracy ~1e-12.
double suris_v(const SurisParams& p, double x);
/// d/d{which} of V(x) (the potential, not V'); cached-table backed.
double suris_partial(const SurisParams& p, SurisCoord which, double x);
/// d/d{which} of V'(x), closed form (differentiate the arctan).
double suris_partial_vprime(const SurisParams& p, SurisCoord which, double x);

/// Trigonometric polynomial perturbation
///   W(x) = mean + sum_m a_m cos(2 pi m x) + b_m sin(2 pi m x).
/// The harmonic lists have no constant term; the mean is carried separately
/// (constants do not affect the dynamics).
struct TrigPerturbation {
  std::vector<double> cos_coeffs;  // a_1 .. a_N
  std::vector<double> sin_coeffs;  // b_1 .. b_N
  double mean = 0.0;

  double value(double x) const;
  /// Exact r-th derivative (any r >= 0).
  double derivative(double x, int r) const;
  int degree() const;
  bool is_zero() const;
};

/// Evaluable 1-periodic potential with derivatives: a Suris potential, a
/// trig-polynomial perturbation, a sum, or a scalar multiple.  Immutable and
/// cheap to copy (shared internals); safe to share across threads.
class Potential {
 public:
  Potential();  // zero potential

  static Potential zero();
  static Potential suris(const SurisParams& p);
  static Potential trig(TrigPerturbation w);
  static Potential sum(Potential a, Potential b);
  static Potential scaled(double factor, Potential a);

  double v(double x) const;
  double vprime(double x) const;
  double vsecond(double x) const;
  /// r-th x-derivative.  Trig parts are exact for all r; Suris parts are
  /// closed-form for r <= 2 and stencil-differentiated (grid-accurate) for
  /// 3 <= r <= 6; larger r throws DomainError.
  double derivative(double x, int r) const;

  /// Short human-readable identity tag ("suris(A=..,..)", "trig(n=..)", ...).
  std::string describe() const;

  /// Flattened form used by serialization: at most one unscaled Suris term
  /// plus an exactly-merged trig polynomial.  Returns nullopt when the tree
  /// is not representable that way (scaled or repeated Suris terms, e.g. the
  /// internal residuals V_S + W - V_S~ used by the projection driver).
  struct Parts {
    std::optional<SurisParams> suris;
    TrigPerturbation trig;
  };
  std::optional<Parts> canonical_parts() const;

 private:
  struct Node;
  explicit Potential(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

/// C^r grid norm: max over derivative orders 0..r of the sup-norm on a
/// 4096-point grid.  Monotone nondecreasing in r.
double cr_norm(const Potential& w, int r);

}  // namespace suris
