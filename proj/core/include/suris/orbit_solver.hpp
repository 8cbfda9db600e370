#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "suris/map_dynamics.hpp"
#include "suris/potentials.hpp"

namespace suris {

/// A (p,q)-periodic configuration in the lift: points x_0..x_{q-1} with the
/// convention x_{i+q} = x_i + p.  `residual` is the sup-norm of the
/// Frenkel-Kontorova residuals over the imposed indices (all indices for a
/// free minimizer, interior indices 1..q-1 for a pinned one).
struct PeriodicConfiguration {
  long p = 0;
  long q = 1;
  std::vector<double> points;
  bool pinned = false;
  double pin = 0.0;
  double residual = 0.0;
  int newton_iterations = 0;
  int gradient_steps = 0;
};

/// All q Frenkel-Kontorova residuals x_{i+1} - 2 x_i + x_{i-1} - V'(x_i)
/// of the configuration (periodic convention at the ends).
std::vector<double> fk_residuals(const Potential& v, const PeriodicConfiguration& c);

struct ActionValue {
  double value = 0.0;
  long p = 0;
  long q = 1;
  bool pinned = false;
  double pin = 0.0;
};

/// Critical configuration of the action sum_{i=0}^{q-1} H_V(x_i, x_{i+1})
/// found by damped Newton on the FK system (periodic tridiagonal-plus-corner
/// Jacobian; bordered elimination with a mean gauge in the free case, plain
/// tridiagonal elimination with x_0 removed in the pinned case), seeded at
/// the rigid rotation x_i = x_0 + i p/q, with a damped-gradient fallback.
/// Requires gcd(|p|, q) = 1.  Throws NoConvergenceError (carrying the best
/// residual) if the sup-norm FK residual cannot be brought under 1e-10.
PeriodicConfiguration minimize_action(const Potential& v, long p, long q,
                                      std::optional<double> pin = std::nullopt);

/// A_V(x) = sum_{i=0}^{q-1} [ (x_{i+1}-x_i)^2/2 + V(x_i) ].
ActionValue action(const Potential& v, const PeriodicConfiguration& c);

/// Mather beta at p/q: action of the free minimizer divided by q.
/// Requires gcd(|p|, q) = 1 (non-reduced input is rejected, not reduced).
double beta(const Potential& v, long p, long q);

/// Reduced rationals p/q in [1/6, 1/3] with denominator <= qmax, sorted by
/// (q, p).  The window of the rigidity experiments.
std::vector<std::pair<long, long>> reduced_rationals_in_window(long qmax);

struct SpectrumEntry {
  long p = 0;
  long q = 1;
  double action = 0.0;
  bool converged = false;
  double residual = 0.0;  // best residual; meaningful also when !converged
};

/// Free-minimizer actions over reduced_rationals_in_window(qmax), qmax <= 64.
/// Per-entry convergence failures are recorded in the entry, not thrown.
std::vector<SpectrumEntry> action_spectrum_sample(const Potential& v, long qmax);

/// max_k |x_k - x'_k| between the pinned (p,q)-configurations of the Suris
/// potential and of the perturbed potential V_S + W, both started at x0.
double orbit_deviation(const SurisParams& ps, const Potential& w, long p, long q,
                       double x0);

/// | A_{V_S+W}(x') - A_{V_S}(x) - sum_k W(x_k) | with the sum evaluated on
/// the Suris pinned orbit points x_k.
double action_deviation(const SurisParams& ps, const Potential& w, long p, long q,
                        double x0);

}  // namespace suris
