#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <complex>
#include <numeric>

#include "oracles.hpp"
#include "suris/deformed_basis.hpp"
#include "suris/errors.hpp"
#include "suris/numerics.hpp"
#include "test_util.hpp"

using namespace suris;

namespace {

Potential one_harmonic(int m, double amp, bool sine = false) {
  TrigPerturbation t;
  auto& v = sine ? t.sin_coeffs : t.cos_coeffs;
  v.assign(m, 0.0);
  v[m - 1] = amp;
  return Potential::trig(t);
}

}  // namespace

TEST_CASE("Fraction reduces and normalizes the sign") {
  CHECK(Fraction(2, 8) == Fraction(1, 4));
  CHECK(Fraction(-2, 8) == Fraction(-1, 4));
  CHECK(Fraction(1, -3) == Fraction(-1, 3));
  CHECK(Fraction(0, 7) == Fraction(0, 1));
  CHECK_ABS(Fraction(3, 12).value(), 0.25, 1e-16);
}

TEST_CASE("mode labels r_q: fixed table then quotient rule") {
  // q = 3..8 table.
  const long nums[] = {1, 1, 2, 1, 2, 1};
  const long dens[] = {3, 4, 5, 6, 7, 4};  // 2/8 reduces to 1/4
  for (long q = 3; q <= 8; ++q) {
    const auto a = r_q_assignment(q);
    CHECK(a.r == Fraction(nums[q - 3], dens[q - 3]));
  }
  // q >= 9: q = 4p + t, r = p/q, and always q (r - 1/4) = -t/4.
  for (long q = 3; q <= 40; ++q) {
    const auto a = r_q_assignment(q);
    CHECK(a.p * 4 + a.t == q);
    if (q >= 9) {
      CHECK(a.t >= 0);
      CHECK(a.t <= 3);
      CHECK(a.r == Fraction(a.p, q));
    }
    const double lhs = q * (a.r.value() - 0.25);
    CHECK_ABS(lhs, -static_cast<double>(a.t) / 4.0, 1e-12);
    // The labels stay inside the charted window.
    CHECK(a.r.value() >= 1.0 / 6.0 - 1e-15);
    CHECK(a.r.value() <= 2.0 / 5.0 + 1e-15);
  }
}

TEST_CASE("inner product is a weighted sesquilinear form") {
  const InnerProductContext ctx(fixtures::canonical(0.02), 512);
  REQUIRE(ctx.grid() == 512);
  // The weight is a probability density on the grid.
  double mean = 0.0;
  for (double w : ctx.weight()) {
    CHECK(w > 0.0);
    mean += w;
  }
  CHECK_ABS(mean / ctx.grid(), 1.0, 1e-12);

  const ComplexVector f = ctx.sample(one_harmonic(1, 1.0));
  const ComplexVector g = ctx.sample(one_harmonic(2, 1.0, true));
  const Complex fg = inner_product(ctx, f, g);
  const Complex gf = inner_product(ctx, g, f);
  CHECK_ABS(fg.real(), gf.real(), 1e-14);
  CHECK_ABS(fg.imag(), -gf.imag(), 1e-14);

  ComplexVector bad(ctx.grid() + 1);
  CHECK_THROWS_AS(inner_product(ctx, f, bad), GridMismatchError);
}

TEST_CASE("basis kinds and conjugation symmetry") {
  const InnerProductContext ctx(fixtures::canonical(0.02), 512);
  CHECK(basis_vector(ctx, 0).kind == BasisVector::Kind::Constant);
  CHECK(basis_vector(ctx, 1).kind == BasisVector::Kind::DerivativeMode);
  CHECK(basis_vector(ctx, -2).kind == BasisVector::Kind::DerivativeMode);
  CHECK(basis_vector(ctx, 3).kind == BasisVector::Kind::ChartMode);

  for (long q : {1L, 2L, 3L, 5L, 9L}) {
    const auto plus = basis_vector(ctx, q).values;
    const auto minus = basis_vector(ctx, -q).values;
    REQUIRE(plus.size() == minus.size());
    for (size_t i = 0; i < plus.size(); ++i) {
      CHECK(minus[i].real() == plus[i].real());
      CHECK(minus[i].imag() == -plus[i].imag());
    }
  }
}

TEST_CASE("intermediate vectors have unit modulus") {
  const InnerProductContext ctx(fixtures::canonical(0.02), 512);
  for (long q : {3L, -7L, 12L}) {
    for (const Complex& z : tilde_e_vector(ctx, q)) CHECK_ABS(std::abs(z), 1.0, 1e-12);
    for (const Complex& z : e_vector(ctx, q)) CHECK_ABS(std::abs(z), 1.0, 1e-12);
  }
}

// ------------------------------------------------------ eps = 0 (exact) ----

TEST_CASE("at eps = 0 the basis degenerates to the Fourier system") {
  const InnerProductContext ctx(SurisParams(), 512);

  // |q| >= 3: f_q = e^{2 pi i q x}.
  for (long q : {3L, -3L, 5L, 8L, -11L}) {
    const auto f = basis_vector(ctx, q).values;
    for (int i = 0; i < ctx.grid(); ++i) {
      const double x = ctx.node(i);
      const Complex expect(num::cos2pi(q * x), num::sin2pi(q * x));
      CHECK_ABS(std::abs(f[i] - expect), 0.0, 1e-10);
    }
  }
  // |q| in {1,2}: f_q = E_q = (e_q - 1)/(2 pi i q).
  for (long q : {1L, -1L, 2L, -2L}) {
    const auto f = basis_vector(ctx, q).values;
    const auto e = cap_e_vector(ctx, q);
    for (int i = 0; i < ctx.grid(); ++i)
      CHECK_ABS(std::abs(f[i] - e[i]), 0.0, 1e-10);
  }
  // f_0 = 1.
  for (const Complex& z : basis_vector(ctx, 0).values)
    CHECK_ABS(std::abs(z - Complex(1.0, 0.0)), 0.0, 1e-14);
}

TEST_CASE("at eps = 0 the low-mode Gram matches the closed form") {
  const InnerProductContext ctx(SurisParams(), 512);
  const GramMatrix g = gram_low_modes(ctx);
  const long qs[5] = {0, 1, -1, 2, -2};

  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) {
      Complex expect;
      if (i == 0 && j == 0) {
        expect = 1.0;
      } else if (j == 0) {  // <E_q, 1> = i/(2 pi q)
        expect = Complex(0.0, 1.0 / (num::kTwoPi * qs[i]));
      } else if (i == 0) {  // <1, E_q> = -i/(2 pi q)
        expect = Complex(0.0, -1.0 / (num::kTwoPi * qs[j]));
      } else {              // <E_p, E_q> = (1 + delta)/(4 pi^2 p q)
        const double delta = (qs[i] == qs[j]) ? 1.0 : 0.0;
        expect = (1.0 + delta) /
                 (4.0 * num::kPi * num::kPi * qs[i] * qs[j]);
      }
      INFO("entry (", i, ",", j, ")");
      CHECK_ABS(std::abs(g[i][j] - expect), 0.0, 1e-9);
      // Hermitian by construction.
      CHECK(g[i][j] == std::conj(g[j][i]));
    }
}

TEST_CASE("coefficients against single harmonics at eps = 0") {
  const InnerProductContext ctx(SurisParams(), 512);
  // <cos(2 pi 3 x), f_3> = <cos(2 pi 3 x), e_3> = 1/2.
  const Complex c3 = coefficient(ctx, one_harmonic(3, 1.0), 3);
  CHECK_ABS(c3.real(), 0.5, 1e-12);
  CHECK_ABS(c3.imag(), 0.0, 1e-12);
  // <sin(2 pi 4 x), f_4> = 1/(2i) -> -i/2... conjugation on the right:
  // int sin(2 pi 4 x) conj(e_4) = -1/(2i) * ... evaluate: int sin e_{-4}
  //   = int [ (e_4 - e_{-4})/(2i) ] e_{-4} dx = -1/(2i) int e_{-8} ... = 0
  //   plus the cross term (1/(2i)) int e_0 = 1/(2i) = -i/2.
  const Complex s4 = coefficient(ctx, one_harmonic(4, 1.0, true), 4);
  CHECK_ABS(s4.real(), 0.0, 1e-12);
  CHECK_ABS(s4.imag(), -0.5, 1e-12);
  // Off-mode coefficient vanishes.
  CHECK_ABS(std::abs(coefficient(ctx, one_harmonic(3, 1.0), 5)), 0.0, 1e-12);
}

TEST_CASE("low-mode projection recovers a representable function exactly") {
  const InnerProductContext ctx(SurisParams(), 512);
  // cos(2 pi x) = 1 - 2 pi^2 d_A V at eps = 0 (since pi d_A V = (1-cos)/2pi).
  const LowModeProjection pr = project_low_modes(ctx, one_harmonic(1, 1.0));
  CHECK_ABS(pr.w0, 1.0, 1e-10);
  CHECK_ABS(pr.alpha, -2.0 * num::kPi * num::kPi, 1e-9);
  CHECK_ABS(pr.beta, 0.0, 1e-10);
  CHECK_ABS(pr.gamma, 0.0, 1e-10);
  CHECK_ABS(pr.delta, 0.0, 1e-10);
  CHECK(pr.max_residual_ip < 1e-12);
  // The sampled projection equals the input.
  for (int i = 0; i < ctx.grid(); ++i)
    CHECK_ABS(pr.values[i], num::cos2pi(ctx.node(i)), 1e-10);
  // Conjugate pairing of the complex coefficients for real input.
  CHECK_ABS(std::abs(pr.coeffs[1] - std::conj(pr.coeffs[2])), 0.0, 1e-12);
  CHECK_ABS(std::abs(pr.coeffs[3] - std::conj(pr.coeffs[4])), 0.0, 1e-12);
}

TEST_CASE("projection self-check stays tiny off the symmetric point") {
  const InnerProductContext ctx(fixtures::canonical(0.02), 512);
  TrigPerturbation t;
  t.cos_coeffs = {0.003, -0.001, 0.0005};
  t.sin_coeffs = {0.002, 0.0, -0.0004};
  const LowModeProjection pr = project_low_modes(ctx, Potential::trig(t));
  CHECK(pr.max_residual_ip < 1e-10);
}

// ------------------------------------------------------------ Riesz needle --

TEST_CASE("finite-section Riesz defect: zero at eps = 0, small in regime") {
  const InnerProductContext ctx0(SurisParams(), 512);
  CHECK(riesz_defect(ctx0, 8) < 1e-10);

  const InnerProductContext ctx(fixtures::canonical(0.02), 512);
  const double d = riesz_defect(ctx, 8);
  CHECK(d > 0.0);
  CHECK(d < 0.5);  // comfortably a Riesz basis at this eccentricity
}

TEST_CASE("chart modes are near-orthogonal to the derivative modes") {
  const InnerProductContext ctx(fixtures::canonical(0.02), 1024);
  double sup = 0.0;
  for (long q = 3; q <= 8; ++q)
    for (long sq : {q, -q}) {
      const auto fq = basis_vector(ctx, sq).values;
      for (long j : {1L, -1L, 2L, -2L}) {
        const auto fj = basis_vector(ctx, j).values;
        sup = std::max(sup, std::abs(inner_product(ctx, fq, fj)));
      }
    }
  INFO("sup = ", sup);
  CHECK(sup < 1e-6);
}
