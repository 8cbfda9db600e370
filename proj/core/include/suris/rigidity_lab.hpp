#pragma once

#include <map>
#include <string>
#include <vector>

#include "suris/potentials.hpp"

namespace suris {

/// Outcome of one experiment driver: the swept variable, the measured
/// quantity per sweep value, a log-log power-law fit where one is meaningful,
/// and the pass verdict against the declared tolerance.  `config` echoes
/// every grid size, iteration count, and threshold that influenced the run,
/// so a report is reproducible from its own contents.
struct EstimateReport {
  std::string id;
  std::vector<double> sweep;
  std::vector<double> measured;
  double fitted_constant = 0.0;  // exp(intercept) of the log-log fit, else a sup
  double fitted_exponent = 0.0;  // slope of the log-log fit, else 0
  double r_squared = 0.0;
  double tolerance = 0.0;  // threshold the verdict was judged against
  bool pass = false;
  std::map<std::string, double> config;
};

/// Checks |<W, f_q>| <= C q^4 ||W||_1^2 for W a Suris increment
/// W_s = V_{S, p + s*delta} - V_{S, p}, sweeping s over `halvings`
/// consecutive halvings starting at s = 1.
///   sweep     = ||W_s||_1,
///   measured  = max_{q in qset} |<W_s, f_q>| / (q^4 ||W_s||_1^2).
/// Fits max_q |<W_s,f_q>|/q^4 against ||W_s||_1 (exponent ~ 2: the linear
/// part of the increment lies in the low-mode span and cancels).  Passes when
/// the normalized constant varies by less than the declared factor (4x)
/// across the sweep.  Only q >= 3 enter qset; for real W the negative modes
/// carry the conjugate coefficients.
EstimateReport verify_action_coefficient_bound(const SurisParams& ps,
                                               const SurisParams& delta,
                                               const std::vector<long>& qset,
                                               int halvings = 4, int grid = 2048);

/// Checks the tail bound |<W, f_q>| <= C ||W||_{C^1} / q for q >= 9:
///   sweep    = q in 9..qmax,
///   measured = q |<W, f_q>| / ||W||_{C^1}.
/// Passes when the sup of `measured` is reproduced under quadrature doubling
/// (within the declared stability factor), i.e. the constant is a property of
/// W, not of the grid.
EstimateReport verify_tail_bound(const SurisParams& ps, const Potential& w,
                                 long qmax, int grid = 2048);

/// Checks near-orthogonality of the chart modes against the derivative modes:
///   sweep    = q in 3..qmax,
///   measured = max over j in {+-1,+-2} and both signs of q of |<f_{+-q}, f_j>|.
/// Requires eccentricity <= 0.05.  Passes when the sup is below `threshold`
/// and shrinks when the quadrature grid is doubled (residual is numerical).
EstimateReport verify_orthogonality(const SurisParams& ps, long qmax,
                                    int grid = 2048, double threshold = 1e-6);

/// Projection step of the rigidity argument.  Each iteration projects the
/// current perturbation W onto the low modes, reads the parameter increment
/// (alpha, beta, gamma, delta), moves the base point to
/// params + (alpha, beta, gamma, delta), and replaces W by
/// W~ = V_S + W - V_S~ (the mean w0 is dropped; constants do not move the
/// parameters).  A step that increases ||W~||_1 is rejected and retried with
/// the increment halved (trust fallback); the halving count is recorded.
struct ProjectionResult {
  SurisParams params_out;
  /// ||W||_1 before any step, then after each accepted step
  /// (size = iterations + 1).
  std::vector<double> residual_norms;
  int trust_halvings = 0;
};
ProjectionResult project_to_suris(const SurisParams& ps, const Potential& w,
                                  int iterations, int grid = 2048);

/// Obstruction to a k-periodic invariant curve of rigid rotations with
/// rotation number r/k: the rigid orbit x_j = x + j r/k satisfies the
/// discrete Euler-Lagrange equation iff V'(x) = 0, so the returned value
/// sup_x |V'(x)| vanishes exactly when such a curve can exist and otherwise
/// quantifies the failure.  Requires gcd(r,k) = 1, k >= 2, and V to be
/// (r/k)-periodic (sampled check, tolerance 1e-10; PeriodMismatchError).
double periodic_rigidity_obstruction(const Potential& v, long r, long k);

/// Compares the minimal-action beta of V_S and V_S + W on every reduced
/// rational p/q in [1/6, 1/3] with q <= qmax:
///   sweep    = p/q,
///   measured = beta(V_S + W, p/q) - beta(V_S, p/q)  (signed).
/// A per-entry solver failure is recorded as NaN instead of aborting the
/// table.  Passes when every entry converged.
EstimateReport beta_consistency(const SurisParams& ps, const Potential& w,
                                long qmax);

}  // namespace suris
