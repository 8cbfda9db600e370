#include "suris/orbit_solver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "suris/errors.hpp"
#include "suris/numerics.hpp"

namespace suris {

namespace {

constexpr double kInnerTarget = 1e-13;  // stop refining below this
constexpr double kAcceptTol = 1e-10;    // contract: sup residual below this
constexpr int kNewtonBudget = 200;
constexpr int kGradientBudget = 2000;

std::vector<double> rigid_seed(long p, long q, double x0) {
  std::vector<double> pts(q);
  for (long i = 0; i < q; ++i)
    pts[i] = x0 + static_cast<double>(i) * static_cast<double>(p) / static_cast<double>(q);
  return pts;
}

std::vector<double> residual_vector(const Potential& v, const std::vector<double>& pts,
                                    long p) {
  const long q = static_cast<long>(pts.size());
  std::vector<double> f(q);
  for (long i = 0; i < q; ++i) {
    const double next = (i + 1 < q) ? pts[i + 1] : pts[0] + static_cast<double>(p);
    const double prev = (i > 0) ? pts[i - 1] : pts[q - 1] - static_cast<double>(p);
    f[i] = next - 2.0 * pts[i] + prev - v.vprime(pts[i]);
  }
  return f;
}

double imposed_sup(const std::vector<double>& f, bool pinned) {
  double worst = 0.0;
  for (size_t i = pinned ? 1 : 0; i < f.size(); ++i)
    worst = std::max(worst, std::fabs(f[i]));
  return worst;
}

/// Newton displacement for the pinned system (unknowns x_1..x_{q-1});
/// empty vector on a failed linear solve.
std::vector<double> pinned_step(const Potential& v, const std::vector<double>& pts,
                                const std::vector<double>& f) {
  const long n = static_cast<long>(pts.size()) - 1;
  std::vector<double> sub(n, 1.0), diag(n), sup(n, 1.0), rhs(n);
  sub[0] = 0.0;
  sup[n - 1] = 0.0;
  for (long j = 0; j < n; ++j) {
    diag[j] = -2.0 - v.vsecond(pts[j + 1]);
    rhs[j] = -f[j + 1];
  }
  return num::solve_tridiagonal(sub, diag, sup, std::move(rhs));
}

/// Newton displacement for the free cyclic system.  The cyclic Jacobian is
/// exactly J = T' + u u^T with u = e_0 + e_{q-1} and T' the tridiagonal part
/// with both corner diagonal entries reduced by 1.  By the determinant lemma
/// det J = det T' * (1 + u^T T'^-1 u), so the Sherman-Morrison denominator
/// doubles as the singularity detector: when it vanishes the potential is
/// (numerically) integrable, the periodic orbits come in a translation
/// family, and we return the mean-preserving representative through a
/// bordered solve instead.
std::vector<double> free_step(const Potential& v, const std::vector<double>& pts,
                              const std::vector<double>& f) {
  const long n = static_cast<long>(pts.size());
  std::vector<double> sub(n, 1.0), diag(n), sup(n, 1.0);
  sub[0] = 0.0;
  sup[n - 1] = 0.0;
  for (long i = 0; i < n; ++i) diag[i] = -2.0 - v.vsecond(pts[i]);
  diag[0] -= 1.0;
  diag[n - 1] -= 1.0;

  std::vector<double> rhs_a(n), rhs_u(n, 0.0);
  for (long i = 0; i < n; ++i) rhs_a[i] = -f[i];
  rhs_u[0] = 1.0;
  rhs_u[n - 1] = 1.0;

  const auto a = num::solve_tridiagonal(sub, diag, sup, std::move(rhs_a));
  const auto b = num::solve_tridiagonal(sub, diag, sup, std::move(rhs_u));

  auto dot_u = [n](const std::vector<double>& z) { return z[0] + z[n - 1]; };
  const double denom = 1.0 + dot_u(b);
  std::vector<double> delta(n);
  if (std::fabs(denom) > 1e-8 * (1.0 + std::fabs(dot_u(b)))) {
    const double s = dot_u(a) / denom;
    for (long i = 0; i < n; ++i) delta[i] = a[i] - s * b[i];
    return delta;
  }

  // Degenerate direction present: add the multiplier system
  //   J delta + lambda 1 = -F,  1^T delta = 0.
  std::vector<double> rhs_one(n, 1.0);
  const auto c = num::solve_tridiagonal(sub, diag, sup, std::move(rhs_one));
  auto dot_one = [](const std::vector<double>& z) {
    num::KahanSum s;
    for (const double zi : z) s.add(zi);
    return s.value();
  };
  // (1 + u.b) s + (u.c) lambda = u.a ;  (1.b) s + (1.c) lambda = 1.a
  const double m00 = denom, m01 = dot_u(c), r0 = dot_u(a);
  const double m10 = dot_one(b), m11 = dot_one(c), r1 = dot_one(a);
  const double det = m00 * m11 - m01 * m10;
  if (!(std::fabs(det) > 1e-300)) return {};
  const double s = (r0 * m11 - r1 * m01) / det;
  const double lambda = (m00 * r1 - m10 * r0) / det;
  for (long i = 0; i < n; ++i) delta[i] = a[i] - s * b[i] - lambda * c[i];
  return delta;
}

void apply_step(std::vector<double>& pts, const std::vector<double>& delta, double lam,
                bool pinned) {
  if (pinned) {
    for (size_t j = 0; j < delta.size(); ++j) pts[j + 1] += lam * delta[j];
  } else {
    for (size_t i = 0; i < delta.size(); ++i) pts[i] += lam * delta[i];
  }
}

}  // namespace

std::vector<double> fk_residuals(const Potential& v, const PeriodicConfiguration& c) {
  return residual_vector(v, c.points, c.p);
}

PeriodicConfiguration minimize_action(const Potential& v, long p, long q,
                                      std::optional<double> pin) {
  if (q < 1) throw DomainError("minimize_action: q >= 1 required");
  if (std::gcd(p < 0 ? -p : p, q) != 1) {
    std::ostringstream os;
    os << "minimize_action: p/q = " << p << "/" << q << " is not in lowest terms";
    throw DomainError(os.str());
  }

  PeriodicConfiguration out;
  out.p = p;
  out.q = q;
  out.pinned = pin.has_value();
  out.pin = pin.value_or(0.0);
  out.points = rigid_seed(p, q, out.pin);

  const bool pinned = out.pinned;
  std::vector<double> pts = out.points;
  std::vector<double> best_pts = pts;
  double best_res = imposed_sup(residual_vector(v, pts, p), pinned);

  auto record = [&](const std::vector<double>& cand, double res) {
    if (res < best_res) {
      best_res = res;
      best_pts = cand;
    }
  };

  // Pinned q = 1 has no unknowns; free q = 1 reduces to the scalar equation
  // V'(x) = 0 whose one-dimensional gauge freedom keeps the seed in place
  // whenever the seed already solves it.
  const bool scalar_free = (!pinned && q == 1);

  auto newton_phase = [&](int budget) {
    for (int it = 0; it < budget; ++it) {
      const auto f = residual_vector(v, pts, p);
      const double res = imposed_sup(f, pinned);
      record(pts, res);
      if (res < kInnerTarget) return true;
      ++out.newton_iterations;

      std::vector<double> delta;
      if (scalar_free) {
        const double j = -v.vsecond(pts[0]);
        if (std::fabs(j) < 1e-14) return false;
        delta = {-f[0] / j};
      } else if (pinned) {
        if (q == 1) return true;  // nothing to solve
        delta = pinned_step(v, pts, f);
      } else {
        delta = free_step(v, pts, f);
      }
      if (delta.empty()) return false;

      bool accepted = false;
      double lam = 1.0;
      for (int t = 0; t < 40; ++t, lam *= 0.5) {
        std::vector<double> cand = pts;
        apply_step(cand, delta, lam, pinned);
        const double cres = imposed_sup(residual_vector(v, cand, p), pinned);
        if (cres < res * (1.0 - 0.25 * lam) || cres < kInnerTarget) {
          pts = std::move(cand);
          record(pts, cres);
          accepted = true;
          break;
        }
      }
      if (!accepted) return false;
    }
    return imposed_sup(residual_vector(v, pts, p), pinned) < kInnerTarget;
  };

  auto gradient_phase = [&]() {
    // x <- x + lr * F descends the action (dA/dx_i = -F_i).
    double lr = 0.05;
    for (int step = 0; step < kGradientBudget; ++step) {
      const auto f = residual_vector(v, pts, p);
      const double res = imposed_sup(f, pinned);
      record(pts, res);
      if (res < kInnerTarget) return;
      ++out.gradient_steps;

      std::vector<double> cand = pts;
      for (size_t i = pinned ? 1 : 0; i < cand.size(); ++i) cand[i] += lr * f[i];
      const double cres = imposed_sup(residual_vector(v, cand, p), pinned);
      if (cres <= res) {
        pts = std::move(cand);
        lr = std::min(lr * 1.2, 0.25);
      } else {
        lr *= 0.5;
        if (lr < 1e-12) return;
      }
    }
  };

  bool done = newton_phase(kNewtonBudget / 2);
  if (!done) {
    gradient_phase();
    done = newton_phase(kNewtonBudget - out.newton_iterations > 0
                            ? kNewtonBudget - out.newton_iterations
                            : 0);
  }
  (void)done;

  out.points = best_pts;
  out.residual = best_res;
  if (!(best_res < kAcceptTol)) {
    std::ostringstream os;
    os << "minimize_action: no convergence for p/q = " << p << "/" << q
       << (pinned ? " (pinned)" : " (free)") << "; best residual " << best_res;
    throw NoConvergenceError(os.str(), best_res);
  }
  return out;
}

ActionValue action(const Potential& v, const PeriodicConfiguration& c) {
  const long q = c.q;
  num::KahanSum acc;
  for (long i = 0; i < q; ++i) {
    const double next =
        (i + 1 < q) ? c.points[i + 1] : c.points[0] + static_cast<double>(c.p);
    const double dx = next - c.points[i];
    acc.add(0.5 * dx * dx + v.v(c.points[i]));
  }
  ActionValue out;
  out.value = acc.value();
  out.p = c.p;
  out.q = c.q;
  out.pinned = c.pinned;
  out.pin = c.pin;
  return out;
}

double beta(const Potential& v, long p, long q) {
  if (q < 1) throw DomainError("beta: q >= 1 required");
  if (std::gcd(p < 0 ? -p : p, q) != 1) {
    std::ostringstream os;
    os << "beta: p/q = " << p << "/" << q << " must be in lowest terms";
    throw DomainError(os.str());
  }
  const PeriodicConfiguration c = minimize_action(v, p, q);
  return action(v, c).value / static_cast<double>(q);
}

std::vector<std::pair<long, long>> reduced_rationals_in_window(long qmax) {
  std::vector<std::pair<long, long>> out;
  for (long q = 1; q <= qmax; ++q) {
    for (long p = (q + 5) / 6; 3 * p <= q; ++p) {
      if (std::gcd(p, q) == 1) out.emplace_back(p, q);
    }
  }
  return out;
}

std::vector<SpectrumEntry> action_spectrum_sample(const Potential& v, long qmax) {
  if (qmax > 64) throw DomainError("action_spectrum_sample: qmax <= 64 required");
  std::vector<SpectrumEntry> out;
  for (const auto& [p, q] : reduced_rationals_in_window(qmax)) {
    SpectrumEntry e;
    e.p = p;
    e.q = q;
    try {
      const PeriodicConfiguration c = minimize_action(v, p, q);
      e.action = action(v, c).value;
      e.residual = c.residual;
      e.converged = true;
    } catch (const NoConvergenceError& err) {
      e.converged = false;
      e.residual = err.best_residual();
    }
    out.push_back(e);
  }
  return out;
}

double orbit_deviation(const SurisParams& ps, const Potential& w, long p, long q,
                       double x0) {
  const Potential base = Potential::suris(ps);
  const Potential perturbed = Potential::sum(base, w);
  const PeriodicConfiguration a = minimize_action(base, p, q, x0);
  const PeriodicConfiguration b = minimize_action(perturbed, p, q, x0);
  double worst = 0.0;
  for (long k = 0; k < q; ++k)
    worst = std::max(worst, std::fabs(a.points[k] - b.points[k]));
  return worst;
}

double action_deviation(const SurisParams& ps, const Potential& w, long p, long q,
                        double x0) {
  const Potential base = Potential::suris(ps);
  const Potential perturbed = Potential::sum(base, w);
  const PeriodicConfiguration a = minimize_action(base, p, q, x0);
  const PeriodicConfiguration b = minimize_action(perturbed, p, q, x0);
  num::KahanSum w_on_base;
  for (long k = 0; k < q; ++k) w_on_base.add(w.v(a.points[k]));
  return std::fabs(action(perturbed, b).value - action(base, a).value -
                   w_on_base.value());
}

}  // namespace suris
