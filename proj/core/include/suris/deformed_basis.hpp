#pragma once

#include <array>
#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <utility>
#include <vector>

#include "suris/action_angle.hpp"
#include "suris/potentials.hpp"

namespace suris {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;

/// Reduced fraction; the cache key for charts of rational rotation number
/// (distinct q can share a chart, e.g. r_4 = r_8 = 1/4).
struct Fraction {
  long num = 0;
  long den = 1;

  Fraction() = default;
  Fraction(long n, long d);  // reduces; requires d != 0, normalizes den > 0

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  bool operator==(const Fraction& o) const { return num == o.num && den == o.den; }
  bool operator<(const Fraction& o) const {
    return num != o.num ? num < o.num : den < o.den;
  }
};

/// The rotation-number label of the q-th basis mode (q >= 3):
/// for q >= 9, q = 4p + t with t in {0,1,2,3} and r = p/q; for q = 3..8 the
/// fixed table {1/3, 1/4, 2/5, 1/6, 2/7, 1/4}.  In all cases
/// q*(r - 1/4) = -t/4 with the signed remainder t = q - 4p, so r lies in
/// [1/6, 2/5] (the table's r_5 = 2/5 steps outside [1/6, 1/3]; see notes).
struct RqAssignment {
  long p = 0;  // quotient in q = 4p + t
  long t = 0;  // signed remainder q - 4p (in {0,1,2,3} once q >= 9)
  Fraction r;  // rotation-number label, reduced
};
RqAssignment r_q_assignment(long q);

/// Shared state of the weighted inner product
///   <f,g> = int_0^1 f(x) conj(g(x)) theta'_{1/4}(x) dx
/// on a fixed equispaced grid (periodic trapezoid; spectrally accurate).
/// Charts for the rational labels r_q are built lazily and memoized; the
/// context is safe to share across threads.
class InnerProductContext {
 public:
  explicit InnerProductContext(const SurisParams& p, int grid = 2048);

  const SurisParams& params() const { return params_; }
  int grid() const { return grid_; }
  double node(int i) const { return static_cast<double>(i) / grid_; }

  /// theta'_{1/4} at the grid nodes; strictly positive, integrates to 1.
  const std::vector<double>& weight() const { return weight_; }
  /// The chart of rotation number 1/4 (the weight chart).
  const AngleChart& chart_quarter() const { return *quarter_; }
  /// Memoized chart at the rational label r.
  const AngleChart& chart(const Fraction& r) const;
  /// d theta_rho / d rho at rho = 1/4 on the grid nodes (Richardson-refined
  /// central differences; built lazily once).  Used by the intermediate
  /// vectors tilde-e_q.
  const std::vector<double>& u_table() const;

  /// Samples a real potential on the grid as a complex vector.
  ComplexVector sample(const Potential& f) const;

 private:
  SurisParams params_;
  int grid_;
  std::unique_ptr<AngleChart> quarter_;
  std::vector<double> weight_;
  mutable std::mutex mu_;
  mutable std::map<Fraction, std::unique_ptr<AngleChart>> charts_;
  mutable std::vector<double> u_;
};

/// <f,g> under ctx; sesquilinear (conjugates g); Kahan-compensated.
/// Throws GridMismatchError unless both vectors have ctx.grid() entries.
Complex inner_product(const InnerProductContext& ctx, const ComplexVector& f,
                      const ComplexVector& g);

/// One deformed-basis mode sampled on the ctx grid.
struct BasisVector {
  long q = 0;
  enum class Kind {
    Constant,        // f_0 = 1
    DerivativeMode,  // |q| in {1,2}: parameter-derivative combinations
    ChartMode        // |q| >= 3: chart exponentials
  } kind = Kind::Constant;
  ComplexVector values;
};

/// f_q per the deformed-basis definition:
///   f_0 = 1,
///   f_{+-1} = pi d_B V +- i pi d_A V,
///   f_{+-2} = pi d_D V +- i pi d_C V,
///   f_q = e^{2 pi i q theta_{r_|q|}} theta'_{r_|q|} / theta'_{1/4}, |q| >= 3;
/// f_{-q} is the pointwise conjugate of f_q in every branch.
BasisVector basis_vector(const InnerProductContext& ctx, long q);

/// e_q = e^{2 pi i q theta_{1/4}} on the grid (orthonormal family).
ComplexVector e_vector(const InnerProductContext& ctx, long q);
/// E_q = (e_q - 1)/(2 pi i q), q != 0.
ComplexVector cap_e_vector(const InnerProductContext& ctx, long q);
/// Intermediate vector for |q| >= 3:
///   tilde-e_q = e_q * exp(2 pi i q (r_|q| - 1/4) u(x)),
/// with the exact exponent q (r_|q| - 1/4) = -sign(q) t_|q| / 4.
ComplexVector tilde_e_vector(const InnerProductContext& ctx, long q);

/// <W, f_q> under ctx.
Complex coefficient(const InnerProductContext& ctx, const Potential& w, long q);

/// Gram matrix of the low modes in the fixed order (f_0, f_1, f_-1, f_2, f_-2);
/// exactly Hermitian by construction (upper triangle computed, mirrored).
using GramMatrix = std::array<std::array<Complex, 5>, 5>;
GramMatrix gram_low_modes(const InnerProductContext& ctx);

/// Orthogonal projection of a real W onto span{f_0, f_{+-1}, f_{+-2}}.
struct LowModeProjection {
  /// Complex coefficients in the order (f_0, f_1, f_-1, f_2, f_-2);
  /// conjugate-paired for real W.
  std::array<Complex, 5> coeffs{};
  /// The same projection re-expressed through real parameters:
  ///   P = w0 + alpha d_A V + beta d_B V + gamma d_C V + delta d_D V.
  double w0 = 0.0, alpha = 0.0, beta = 0.0, gamma = 0.0, delta = 0.0;
  /// P sampled on the grid (real part; imaginary part is rounding for real W).
  std::vector<double> values;
  /// max_j |<W - P, f_j>| over the five modes (self-check).
  double max_residual_ip = 0.0;
};
LowModeProjection project_low_modes(const InnerProductContext& ctx, const Potential& w);

/// Finite-section Riesz diagnostic: the spectral norm of the operator
/// b_q -> f_q - b_q restricted (and projected back) to
/// span{b_q : |q| <= n}, where b_q = E_q for |q| in {1,2} and e_q otherwise,
/// computed in the orthonormalized frame (Cholesky of the frame Gram).
/// Requires n <= 64.
double riesz_defect(const InnerProductContext& ctx, int n);

}  // namespace suris
