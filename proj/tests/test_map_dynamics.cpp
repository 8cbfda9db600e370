#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "suris/map_dynamics.hpp"
#include "suris/numerics.hpp"
#include "suris/potentials.hpp"
#include "test_util.hpp"

using namespace suris;

namespace {
const SurisParams kRef = fixtures::reference_params();
}

TEST_CASE("step applies the standard-map formula") {
  const Potential v = Potential::suris(kRef);
  const PhasePoint z{0.31, 0.27};
  const PhasePoint z1 = step(v, z);
  const double kick = v.vprime(0.31);
  CHECK_ABS(z1.y, 0.27 + kick, 1e-16);
  CHECK_ABS(z1.x, 0.31 + 0.27 + kick, 1e-16);

  // Free rotation when V = 0.
  const PhasePoint f1 = step(Potential::zero(), {0.1, 0.25});
  CHECK(f1.x == 0.35);
  CHECK(f1.y == 0.25);
}

TEST_CASE("iterate returns n+1 points consistent with step") {
  const Potential v = Potential::suris(kRef);
  const OrbitSegment seg = iterate(v, {0.2, 0.4}, 25);
  REQUIRE(seg.points.size() == 26);
  PhasePoint z{0.2, 0.4};
  for (const auto& pt : seg.points) {
    CHECK(pt.x == z.x);
    CHECK(pt.y == z.y);
    z = step(v, z);
  }
  CHECK_FALSE(seg.potential_tag.empty());
}

TEST_CASE("generating function and FK residual definitions") {
  const Potential v = Potential::suris(kRef);
  CHECK_ABS(generating_h(v, 0.3, 0.7), 0.5 * 0.16 + v.v(0.3), 1e-15);
  // x-projections of orbits null the second-difference residual.
  const OrbitSegment seg = iterate(v, {0.15, 0.33}, 10);
  for (size_t i = 1; i + 1 < seg.points.size(); ++i) {
    CHECK_ABS(fk_residual(v, seg.points[i - 1].x, seg.points[i].x,
                          seg.points[i + 1].x),
              0.0, 1e-13);
  }
  // Non-orbit triples do not.
  CHECK(std::fabs(fk_residual(v, 0.0, 0.1, 0.5)) > 0.1);
}

TEST_CASE("first integral is conserved along orbits") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (double eps : {0.02, 0.1}) {
    const SurisParams p = fixtures::canonical(eps);
    const Potential v = Potential::suris(p);
    for (int s = 0; s < 5; ++s) {
      PhasePoint z{unif(rng), unif(rng)};
      const double i0 = first_integral(p, z);
      double drift = 0.0;
      for (int n = 0; n < 2000; ++n) {
        z = step(v, z);
        drift = std::max(drift, std::fabs(first_integral(p, z) - i0));
      }
      INFO("eps ", eps, " seed ", s);
      CHECK(drift < 1e-11);
    }
  }
}

TEST_CASE("first integral is 1-periodic in x and y") {
  for (double x : {0.21, 0.73})
    for (double y : {0.08, 0.55}) {
      const double base = first_integral(kRef, {x, y});
      CHECK_ABS(first_integral(kRef, {x + 1.0, y}), base, 1e-14);
      CHECK_ABS(first_integral(kRef, {x, y + 1.0}), base, 1e-14);
    }
}

TEST_CASE("first integral agrees with the alpha/beta/gamma level form") {
  for (double x : {0.1, 0.37, 0.9})
    for (double y : {0.15, 0.42, 0.78}) {
      const auto g = alpha_beta_gamma_d(kRef, x);
      const double expect = -g.alpha * num::cos2pi(y) + g.beta * num::sin2pi(y) +
                            g.gamma;
      CHECK_ABS(first_integral(kRef, {x, y}), expect, 1e-14);
    }
}

TEST_CASE("two-point form matches I along the orbit") {
  const Potential v = Potential::suris(kRef);
  PhasePoint z{0.27, 0.61};
  for (int n = 0; n < 50; ++n) {
    const PhasePoint z1 = step(v, z);
    CHECK_ABS(phi_form(kRef, z.x, z1.x), first_integral(kRef, z1), 1e-12);
    z = z1;
  }
}

TEST_CASE("integral_range brackets sampled values and matches an oracle scan") {
  const auto r = integral_range(kRef);
  CHECK(r.lo < r.hi);

  double lo = 1e300, hi = -1e300;
  for (int i = 0; i < 20001; ++i) {
    const double x = i / 20001.0;
    const auto g = alpha_beta_gamma_d(kRef, x);
    lo = std::min(lo, g.gamma - g.D);
    hi = std::max(hi, g.gamma + g.D);
  }
  CHECK_ABS(r.lo, lo, 1e-8);
  CHECK_ABS(r.hi, hi, 1e-8);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int k = 0; k < 200; ++k) {
    const double i = first_integral(kRef, {unif(rng), unif(rng)});
    CHECK(i >= r.lo - 1e-12);
    CHECK(i <= r.hi + 1e-12);
  }
}
