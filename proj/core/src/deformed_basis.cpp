#include "suris/deformed_basis.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numeric>
#include <sstream>

#include "suris/errors.hpp"
#include "suris/numerics.hpp"

namespace suris {

Fraction::Fraction(long n, long d) {
  if (d == 0) throw DomainError("Fraction: zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  const long g = std::gcd(n < 0 ? -n : n, d);
  num = g ? n / g : n;
  den = g ? d / g : d;
}

RqAssignment r_q_assignment(long q) {
  if (q < 3) throw DomainError("r_q_assignment: q >= 3 required");
  RqAssignment out;
  if (q <= 8) {
    // Fixed table; p is the (unreduced) numerator over denominator q.
    static const long table_num[] = {1, 1, 2, 1, 2, 2};  // q = 3..8
    out.p = table_num[q - 3];
    out.r = Fraction(out.p, q);
  } else {
    out.p = q / 4;
    out.r = Fraction(out.p, q);
  }
  out.t = q - 4 * out.p;
  return out;
}

InnerProductContext::InnerProductContext(const SurisParams& p, int grid)
    : params_(p), grid_(grid) {
  if (grid < 64) throw DomainError("InnerProductContext: grid too small");
  quarter_ = std::make_unique<AngleChart>(build_chart(params_, 0.25, grid_));
  weight_.resize(grid_);
  num::KahanSum mean;
  for (int i = 0; i < grid_; ++i) {
    weight_[i] = quarter_->theta_prime(node(i));
    if (!(weight_[i] > 0.0))
      throw DomainError("InnerProductContext: nonpositive weight sample");
    mean.add(weight_[i]);
  }
  const double integral = mean.value() / grid_;
  if (std::fabs(integral - 1.0) > 1e-10) {
    std::ostringstream os;
    os << "InnerProductContext: weight integrates to " << integral << ", expected 1";
    throw DomainError(os.str());
  }
}

const AngleChart& InnerProductContext::chart(const Fraction& r) const {
  const std::lock_guard<std::mutex> lock(mu_);
  auto it = charts_.find(r);
  if (it == charts_.end()) {
    auto chart = std::make_unique<AngleChart>(build_chart(params_, r.value(), grid_));
    it = charts_.emplace(r, std::move(chart)).first;
  }
  return *it->second;
}

const std::vector<double>& InnerProductContext::u_table() const {
  const std::lock_guard<std::mutex> lock(mu_);
  if (u_.empty()) {
    constexpr double h = 1e-3;
    const auto nodes_at = [this](double rho) {
      const AngleChart chart = build_chart(params_, rho, grid_);
      std::vector<double> out(grid_);
      for (int i = 0; i < grid_; ++i) out[i] = chart.theta(node(i));
      return out;
    };
    const auto tp = nodes_at(0.25 + h), tm = nodes_at(0.25 - h);
    const auto tp2 = nodes_at(0.25 + 0.5 * h), tm2 = nodes_at(0.25 - 0.5 * h);
    u_.resize(grid_);
    for (int i = 0; i < grid_; ++i) {
      const double d_h = (tp[i] - tm[i]) / (2.0 * h);
      const double d_h2 = (tp2[i] - tm2[i]) / h;
      u_[i] = (4.0 * d_h2 - d_h) / 3.0;
    }
  }
  return u_;
}

ComplexVector InnerProductContext::sample(const Potential& f) const {
  ComplexVector out(grid_);
  for (int i = 0; i < grid_; ++i) out[i] = Complex(f.v(node(i)), 0.0);
  return out;
}

Complex inner_product(const InnerProductContext& ctx, const ComplexVector& f,
                      const ComplexVector& g) {
  const int n = ctx.grid();
  if (static_cast<int>(f.size()) != n || static_cast<int>(g.size()) != n) {
    std::ostringstream os;
    os << "inner_product: vectors of size " << f.size() << " and " << g.size()
       << " on a grid of " << n << " nodes";
    throw GridMismatchError(os.str());
  }
  const auto& w = ctx.weight();
  num::KahanSum re, im;
  for (int i = 0; i < n; ++i) {
    const Complex term = f[i] * std::conj(g[i]) * w[i];
    re.add(term.real());
    im.add(term.imag());
  }
  return Complex(re.value() / n, im.value() / n);
}

namespace {

Complex unit_phase(double turns) {
  return Complex(num::cos2pi(turns), num::sin2pi(turns));
}

}  // namespace

ComplexVector e_vector(const InnerProductContext& ctx, long q) {
  const AngleChart& chart = ctx.chart_quarter();
  ComplexVector out(ctx.grid());
  for (int i = 0; i < ctx.grid(); ++i)
    out[i] = unit_phase(static_cast<double>(q) * chart.theta(ctx.node(i)));
  return out;
}

ComplexVector cap_e_vector(const InnerProductContext& ctx, long q) {
  if (q == 0) throw DomainError("cap_e_vector: q must be nonzero");
  ComplexVector out = e_vector(ctx, q);
  const Complex denom(0.0, num::kTwoPi * static_cast<double>(q));
  for (auto& v : out) v = (v - 1.0) / denom;
  return out;
}

ComplexVector tilde_e_vector(const InnerProductContext& ctx, long q) {
  const long aq = q < 0 ? -q : q;
  if (aq < 3) throw DomainError("tilde_e_vector: |q| >= 3 required");
  const RqAssignment assign = r_q_assignment(aq);
  // q (r_|q| - 1/4) = -sign(q) t_|q| / 4, exactly.
  const double factor = (q < 0 ? 1.0 : -1.0) * static_cast<double>(assign.t) / 4.0;
  const auto& u = ctx.u_table();
  ComplexVector out = e_vector(ctx, q);
  for (int i = 0; i < ctx.grid(); ++i) out[i] *= unit_phase(factor * u[i]);
  return out;
}

BasisVector basis_vector(const InnerProductContext& ctx, long q) {
  BasisVector out;
  out.q = q;
  const int n = ctx.grid();
  out.values.resize(n);
  const long aq = q < 0 ? -q : q;
  if (q == 0) {
    out.kind = BasisVector::Kind::Constant;
    for (auto& v : out.values) v = Complex(1.0, 0.0);
    return out;
  }
  if (aq <= 2) {
    out.kind = BasisVector::Kind::DerivativeMode;
    const SurisCoord re_coord = (aq == 1) ? SurisCoord::B : SurisCoord::D;
    const SurisCoord im_coord = (aq == 1) ? SurisCoord::A : SurisCoord::C;
    const double sign = q > 0 ? 1.0 : -1.0;
    for (int i = 0; i < n; ++i) {
      const double x = ctx.node(i);
      out.values[i] = Complex(num::kPi * suris_partial(ctx.params(), re_coord, x),
                              sign * num::kPi * suris_partial(ctx.params(), im_coord, x));
    }
    return out;
  }
  out.kind = BasisVector::Kind::ChartMode;
  const AngleChart& chart = ctx.chart(r_q_assignment(aq).r);
  const auto& w = ctx.weight();
  for (int i = 0; i < n; ++i) {
    const double x = ctx.node(i);
    out.values[i] = unit_phase(static_cast<double>(q) * chart.theta(x)) *
                    (chart.theta_prime(x) / w[i]);
  }
  return out;
}

Complex coefficient(const InnerProductContext& ctx, const Potential& w, long q) {
  return inner_product(ctx, ctx.sample(w), basis_vector(ctx, q).values);
}

namespace {

constexpr std::array<long, 5> kLowModeOrder = {0, 1, -1, 2, -2};

std::array<ComplexVector, 5> low_mode_vectors(const InnerProductContext& ctx) {
  std::array<ComplexVector, 5> out;
  for (int i = 0; i < 5; ++i) out[i] = basis_vector(ctx, kLowModeOrder[i]).values;
  return out;
}

Eigen::Matrix<Complex, 5, 5> gram_eigen(const GramMatrix& g) {
  Eigen::Matrix<Complex, 5, 5> m;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) m(i, j) = g[i][j];
  return m;
}

}  // namespace

GramMatrix gram_low_modes(const InnerProductContext& ctx) {
  const auto f = low_mode_vectors(ctx);
  GramMatrix g{};
  for (int i = 0; i < 5; ++i) {
    for (int j = i; j < 5; ++j) {
      g[i][j] = inner_product(ctx, f[i], f[j]);
      g[j][i] = std::conj(g[i][j]);
    }
  }
  return g;
}

LowModeProjection project_low_modes(const InnerProductContext& ctx, const Potential& w) {
  const auto f = low_mode_vectors(ctx);
  const ComplexVector ws = ctx.sample(w);

  const GramMatrix g_arr = gram_low_modes(ctx);
  const Eigen::Matrix<Complex, 5, 5> g = gram_eigen(g_arr);
  {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix<Complex, 5, 5>> es(g);
    const double lo = es.eigenvalues().minCoeff();
    const double hi = es.eigenvalues().maxCoeff();
    if (!(lo > 1e-12 * std::max(hi, 1.0)))
      throw SingularGramError("low-mode Gram is numerically singular (eccentricity too large)");
  }

  // Normal equations: G c = b with b_i = <W, f_i>; G_{ij} = <f_j, f_i> so that
  // <W - sum_j c_j f_j, f_i> = 0.
  Eigen::Matrix<Complex, 5, 5> gt;
  Eigen::Matrix<Complex, 5, 1> b;
  for (int i = 0; i < 5; ++i) {
    b(i) = inner_product(ctx, ws, f[i]);
    for (int j = 0; j < 5; ++j) gt(i, j) = g_arr[j][i];
  }
  const Eigen::Matrix<Complex, 5, 1> c = gt.fullPivLu().solve(b);

  LowModeProjection out;
  for (int i = 0; i < 5; ++i) out.coeffs[i] = c(i);
  out.w0 = c(0).real();
  // P = w0 + alpha d_A V + beta d_B V + gamma d_C V + delta d_D V, from
  // d_B V = (f_1 + f_-1)/(2 pi), d_A V = -i (f_1 - f_-1)/(2 pi) and the
  // (D, C) analogues: c_1 = (beta - i alpha)/(2 pi).
  out.alpha = -num::kTwoPi * c(1).imag();
  out.beta = num::kTwoPi * c(1).real();
  out.gamma = -num::kTwoPi * c(3).imag();
  out.delta = num::kTwoPi * c(3).real();

  const int n = ctx.grid();
  out.values.resize(n);
  ComplexVector proj(n);
  for (int i = 0; i < n; ++i) {
    Complex acc(0.0, 0.0);
    for (int j = 0; j < 5; ++j) acc += c(j) * f[j][i];
    proj[i] = acc;
    out.values[i] = acc.real();
  }
  ComplexVector resid(n);
  for (int i = 0; i < n; ++i) resid[i] = ws[i] - proj[i];
  for (int j = 0; j < 5; ++j)
    out.max_residual_ip =
        std::max(out.max_residual_ip, std::abs(inner_product(ctx, resid, f[j])));
  return out;
}

double riesz_defect(const InnerProductContext& ctx, int n) {
  if (n < 3) throw DomainError("riesz_defect: n >= 3 required");
  if (n > 64) throw DomainError("riesz_defect: n <= 64 required");
  const int m = 2 * n + 1;

  std::vector<ComplexVector> frame(m), gap(m);
  for (int j = 0; j < m; ++j) {
    const long q = static_cast<long>(j) - n;
    const long aq = q < 0 ? -q : q;
    if (q == 0) {
      frame[j] = ComplexVector(ctx.grid(), Complex(1.0, 0.0));
    } else if (aq <= 2) {
      frame[j] = cap_e_vector(ctx, q);
    } else {
      frame[j] = e_vector(ctx, q);
    }
    gap[j] = basis_vector(ctx, q).values;
    for (int k = 0; k < ctx.grid(); ++k) gap[j][k] -= frame[j][k];
  }

  Eigen::MatrixXcd gram(m, m), diff(m, m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      // gram(i,j) = <b_j, b_i> makes x* G x = |sum_q x_q b_q|^2.
      gram(i, j) = inner_product(ctx, frame[j], frame[i]);
      diff(i, j) = inner_product(ctx, gap[j], frame[i]);
    }
  }

  const Eigen::LLT<Eigen::MatrixXcd> llt(gram);
  if (llt.info() != Eigen::Success)
    throw SingularGramError("riesz_defect: frame Gram not positive definite");
  const Eigen::MatrixXcd l = llt.matrixL();
  // S = L^{-1} D L^{-*}: the operator in the orthonormalized frame.
  const Eigen::MatrixXcd half = l.triangularView<Eigen::Lower>().solve(diff);
  const Eigen::MatrixXcd s =
      l.triangularView<Eigen::Lower>().solve(half.adjoint()).adjoint();
  return s.jacobiSvd().singularValues()(0);
}

}  // namespace suris
