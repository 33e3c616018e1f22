#ifndef SADDLE_DIAGNOSTICS_HPP
#define SADDLE_DIAGNOSTICS_HPP

#include <string>

#include "saddle/algorithms.hpp"

namespace saddle {

// Converged / Cycle / Diverged / Undetermined classification of a finished
// trajectory. Cycle carries a recurrence witness: some iterate after burn-in
// returned within cycle_tol of an earlier one at lag >= 2 while the gradient
// stayed above grad_tol.
struct RegimeLabel {
  enum class Tag { kConverged, kCycle, kDiverged, kUndetermined };
  Tag tag = Tag::kUndetermined;
  SplitPoint point;             // Converged: the limit point
  int period_estimate = 0;      // Cycle: lag of the best recurrence
  double radius_estimate = 0.0; // Cycle: RMS distance from the window centroid
  double recurrence_dist = 0.0; // Cycle: distance of the best recurrence
};

std::string regime_name(RegimeLabel::Tag tag);

// The closed-form landscape of damped PPM on the rotational quadratic:
// every step is the linear map [C I, -D I; D I, C I], so squared norms scale
// by exactly C^2 + D^2 per step.
struct QuadraticOracle {
  double alpha = 0.0;  // -rho + a^2/(eta - rho)
  double C = 0.0;      // 1 - lambda alpha/(eta + alpha)
  double D = 0.0;      // lambda eta a/((eta + alpha)(eta - rho))
  double factor = 0.0; // C^2 + D^2
  bool converges = false;  // factor < 1 (and not within the cycle band)
  bool cycles = false;     // |factor - 1| <= 1e-12
};

// Report of the weak-interaction initialization analysis at z0 (from
// init_weak applied at z'): the dominance lower bound alpha0, the inner/outer
// radii of the convergence region, the two sufficient conditions as booleans,
// and the admissible damping bound.
struct WeakRegimeReport {
  SplitPoint z0;
  double mu = 0.0;
  double alpha0 = 0.0;
  double r = 0.0;
  double R = 0.0;
  bool psd_ok = false;
  bool local_ok = false;
  double lambda_max = 0.0;
  double grad_norm_z0 = 0.0;
};

// Lyapunov value -e_eta{-L(x,.)}(y) - e_eta{L(.,y)}(x): nonnegative, zero
// exactly at stationary points when eta > rho.
double lyapunov(const MinimaxProblem& p, const SplitPoint& z, double eta,
                double tol = -1.0);

// Slack of the one-step recurrence
//   Lyap(z+) <= Lyap(z) - (1/2)(alpha + (eta^{-1}-rho^{-1})^{-1}) |z+ - z|^2
// at z+ = prox_eta(z); nonnegative when alpha is a valid dominance infimum
// for the region visited, and identically zero on the rotational quadratic.
double lyapunov_recurrence_slack(const MinimaxProblem& p, const SplitPoint& z,
                                 double eta, double alpha, double tol = -1.0);

// Precedence: Diverged > Converged > Cycle > Undetermined. cycle_tol <= 0
// selects 1e-4 * (1 + mean iterate norm over the window).
RegimeLabel classify(const Trajectory& t, double grad_tol, double cycle_tol = -1.0,
                     int burn_in = 500, int window = 400);

QuadraticOracle quadratic_oracle(double rho, double a, double eta, double lambda);

// Guaranteed squared-distance contraction factor of damped PPM under
// alpha > 0 two-sided dominance:
//   1 - 2 lambda/(eta/alpha + 1) + lambda^2 / min{1, (eta/rho - 1)^2}.
// Throws ParameterError when lambda exceeds the admissible bound.
double rate_two_sided(double eta, double lambda, double rho, double alpha);

// The admissible damping bound 2 min{1, (eta/rho - 1)^2} / (eta/alpha + 1).
double lambda_bound_two_sided(double eta, double rho, double alpha);

// Damping suggestions for the one-sided (y-dominant) scheme with the hidden
// Theta-constants set to c:
//   lambda = c min{1, |eta/rho - 1|^3} / (1 + eta/alpha)^2,
//   gamma  = c min{1, |eta/rho - 1|},
// both clamped into (0, 1].
std::pair<double, double> suggest_one_sided_params(double eta, double rho,
                                                   double alpha,
                                                   double c_multiplier);

// Blockwise initialization: descend u -> L(u, y') from x', ascend
// v -> L(x', v) from y', each to block-gradient norm <= tol. eta sets the
// initial backtracking stepsize 1/eta.
SplitPoint init_weak(const MinimaxProblem& p, const SplitPoint& z_prime, double eta,
                     double tol);

// Evaluates the weak-interaction sufficient conditions at z0. Requires the
// problem to carry H, delta and xi. Pass mu_local = NaN to estimate mu as the
// floored smallest block-Hessian eigenvalue at the block-local optima.
WeakRegimeReport weak_regime_check(
    const MinimaxProblem& p, const SplitPoint& z_prime, const SplitPoint& z0,
    double eta, double mu_local = std::numeric_limits<double>::quiet_NaN());

}  // namespace saddle

#endif  // SADDLE_DIAGNOSTICS_HPP
