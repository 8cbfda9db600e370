#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <numeric>
#include <utility>
#include <vector>

#include "oracles.hpp"
#include "suris/errors.hpp"
#include "suris/orbit_solver.hpp"
#include "test_util.hpp"

using namespace suris;

namespace {
const SurisParams kRef = fixtures::reference_params();

Potential small_trig() {
  TrigPerturbation t;
  t.cos_coeffs = {1e-3, 5e-4};
  t.sin_coeffs = {2e-4};
  return Potential::trig(t);
}
}  // namespace

TEST_CASE("free rotation: rigid orbits, exact actions, exact beta") {
  const Potential zero = Potential::zero();
  const auto c = minimize_action(zero, 1, 4);
  REQUIRE(c.points.size() == 4);
  for (int i = 0; i < 4; ++i) CHECK_ABS(c.points[i], i * 0.25, 1e-14);
  CHECK(c.residual < 1e-13);

  // A(x) = q (p/q)^2 / 2 = p^2/(2q) for the rigid rotation.
  CHECK_ABS(action(zero, c).value, 0.125, 1e-15);

  // beta(p/q) = p^2 / (2 q^2) for every reduced rational, denominator <= 12.
  for (long q = 1; q <= 12; ++q)
    for (long p = 0; p <= q; ++p) {
      if (std::gcd(p, q) != 1) continue;
      const double expect = static_cast<double>(p * p) / (2.0 * q * q);
      INFO(p, "/", q);
      CHECK_ABS(beta(zero, p, q), expect, 1e-12);
    }
}

TEST_CASE("non-reduced and invalid fractions are rejected") {
  CHECK_THROWS_AS(minimize_action(Potential::zero(), 2, 4), DomainError);
  CHECK_THROWS_AS(beta(Potential::zero(), 2, 4), DomainError);
  CHECK_THROWS_AS(minimize_action(Potential::zero(), 1, 0), DomainError);
  CHECK_THROWS_AS(action_spectrum_sample(Potential::zero(), 65), DomainError);
}

TEST_CASE("free minimizer solves the FK system on a Suris potential") {
  const Potential v = Potential::suris(kRef);
  const auto c = minimize_action(v, 1, 4);
  CHECK(c.residual < 1e-12);
  CHECK_FALSE(c.pinned);
  const auto res = fk_residuals(v, c);
  REQUIRE(res.size() == 4);
  for (double r : res) CHECK(std::fabs(r) < 1e-10);
  // The configuration is ordered and winds by p.
  for (int i = 0; i + 1 < 4; ++i) CHECK(c.points[i + 1] > c.points[i]);
}

TEST_CASE("pinned minimizer holds the pin and solves the interior") {
  const Potential v = Potential::suris(kRef);
  const auto c = minimize_action(v, 1, 4, 0.3);
  REQUIRE(c.points.size() == 4);
  CHECK(c.pinned);
  CHECK(c.pin == 0.3);
  CHECK(c.points[0] == 0.3);
  CHECK(c.residual < 1e-12);
  const auto res = fk_residuals(v, c);
  // Interior residuals vanish; the pinned index is not imposed.
  for (size_t i = 1; i < res.size(); ++i) CHECK(std::fabs(res[i]) < 1e-10);
}

TEST_CASE("pinning at the free base point reproduces the free action") {
  const Potential v = Potential::suris(kRef);
  const auto f = minimize_action(v, 2, 7);
  const auto pc = minimize_action(v, 2, 7, f.points[0]);
  CHECK_ABS(action(v, pc).value, action(v, f).value, 1e-12);
}

TEST_CASE("on the integrable family pinned actions are pin-independent") {
  // Rational integrability: the (1,4)-orbits fill a full invariant curve, so
  // the action does not depend on the base point.
  const Potential v = Potential::suris(fixtures::canonical(0.05));
  const double a0 = action(v, minimize_action(v, 1, 4, 0.0)).value;
  for (double pin : {0.2, 0.45, 0.7, 0.9}) {
    const double a = action(v, minimize_action(v, 1, 4, pin)).value;
    INFO("pin ", pin);
    CHECK_ABS(a, a0, 1e-10);
  }
}

TEST_CASE("perturbed potentials break the degeneracy but still solve") {
  const Potential v = Potential::sum(Potential::suris(kRef), small_trig());
  const auto c = minimize_action(v, 1, 4);
  CHECK(c.residual < 1e-12);
  const auto cp = minimize_action(v, 1, 4, 0.25);
  CHECK(cp.residual < 1e-12);
  CHECK(cp.points[0] == 0.25);
}

TEST_CASE("fixed point of the q = 1 solver is a critical point of V") {
  const Potential v = Potential::suris(kRef);
  const auto c = minimize_action(v, 0, 1);
  REQUIRE(c.points.size() == 1);
  CHECK(std::fabs(v.vprime(c.points[0])) < 1e-12);
}

TEST_CASE("window rationals: exactly the reduced fractions in [1/6, 1/3]") {
  const auto r12 = reduced_rationals_in_window(12);
  const std::vector<std::pair<long, long>> expect = {
      {1, 3}, {1, 4}, {1, 5}, {1, 6}, {2, 7}, {2, 9}, {3, 10}, {2, 11}, {3, 11}};
  REQUIRE(r12.size() == expect.size());
  for (size_t i = 0; i < expect.size(); ++i) {
    CHECK(r12[i].first == expect[i].first);
    CHECK(r12[i].second == expect[i].second);
  }
  for (const auto& [p, q] : reduced_rationals_in_window(40)) {
    CHECK(std::gcd(p, q) == 1);
    CHECK(3 * p <= q);
    CHECK(6 * p >= q);
  }
}

TEST_CASE("action spectrum converges on every window rational") {
  const auto entries = action_spectrum_sample(Potential::suris(kRef), 12);
  REQUIRE(entries.size() == 9);
  for (const auto& e : entries) {
    INFO(e.p, "/", e.q);
    CHECK(e.converged);
    CHECK(e.residual < 1e-10);
    CHECK(std::isfinite(e.action));
    // Sanity: the action is near the rigid-rotation value for small eps.
    const double rigid = static_cast<double>(e.p * e.p) / (2.0 * e.q);
    CHECK(std::fabs(e.action - rigid) < 0.1);
  }
}

TEST_CASE("deviations scale linearly (orbit) and quadratically (action)") {
  const Potential w = small_trig();
  const Potential wh = Potential::scaled(0.5, w);
  const double o1 = orbit_deviation(kRef, w, 1, 5, 0.1);
  const double o2 = orbit_deviation(kRef, wh, 1, 5, 0.1);
  const double a1 = action_deviation(kRef, w, 1, 5, 0.1);
  const double a2 = action_deviation(kRef, wh, 1, 5, 0.1);
  CHECK(o1 > 0.0);
  CHECK(a1 > 0.0);
  INFO("orbit ratio ", o1 / o2, " action ratio ", a1 / a2);
  CHECK(o1 / o2 > 1.7);
  CHECK(o1 / o2 < 2.3);
  CHECK(a1 / a2 > 3.4);
  CHECK(a1 / a2 < 4.6);
}

TEST_CASE("deviation of the zero perturbation vanishes") {
  CHECK(orbit_deviation(kRef, Potential::zero(), 1, 4, 0.2) < 1e-12);
  CHECK(action_deviation(kRef, Potential::zero(), 1, 4, 0.2) < 1e-12);
}
