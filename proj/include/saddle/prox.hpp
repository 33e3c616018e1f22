#ifndef SADDLE_PROX_HPP
#define SADDLE_PROX_HPP

#include <vector>

#include "saddle/errors.hpp"
#include "saddle/problems.hpp"

namespace saddle {

// Result of solving the proximal subproblem
//   min_u max_v  L(u,v) + (eta/2)|u-x|^2 - (eta/2)|v-y|^2
// at a center z = (x, y). The subproblem is (eta - rho)-strongly
// convex-strongly concave for eta > rho, so z_plus is unique. residual is the
// norm of the subproblem gradient at z_plus.
struct ProxResult {
  SplitPoint z_plus;
  double residual = 0.0;
  int inner_iters = 0;
  double eta = 0.0;
};

struct PartialEnvelopeResult {
  double value = 0.0;
  Eigen::VectorXd arg;
  double residual = 0.0;
};

enum class InnerMethod {
  kAuto,    // damped Newton, GDA step on failure
  kNewton,  // damped Newton only
  kGda      // the certified fallback: fixed step s = mu/(beta+eta)^2
};

struct InnerOptions {
  // <= 0 selects the default 1e-10 * max(1, |grad L(center)|).
  double tol = -1.0;
  int max_iter = 10000;
  InnerMethod method = InnerMethod::kAuto;
  // Initial iterate; defaults to the center (warm start).
  const SplitPoint* start = nullptr;
  // When set, the iterate sequence is appended here (initial point included).
  std::vector<SplitPoint>* trace = nullptr;
};

// Thrown when the iteration budget runs out before reaching tol; carries the
// best iterate found.
struct ConvergenceError : Error {
  ConvergenceError(const std::string& msg, ProxResult best_)
      : Error(msg), best(std::move(best_)) {}
  ProxResult best;
};

double default_inner_tol(const MinimaxProblem& p, const SplitPoint& z);

// Solves the proximal subproblem at `center`. Throws ParameterError if
// eta <= rho, ConvergenceError if the budget is exhausted.
ProxResult inner_solve(const MinimaxProblem& p, const SplitPoint& center,
                       double eta, const InnerOptions& opts = {});

// The proximal operator z -> prox_eta(z); thin wrapper over inner_solve with
// default options.
ProxResult prox(const MinimaxProblem& p, const SplitPoint& z, double eta,
                double tol = -1.0);

// Partial Moreau envelopes at z = (x, y):
//   partial_moreau_x: value = min_u L(u, y) + (eta/2)|u-x|^2, arg = minimizer
//   partial_moreau_y: value = max_v L(x, v) - (eta/2)|v-y|^2, arg = maximizer
PartialEnvelopeResult partial_moreau_x(const MinimaxProblem& p, const SplitPoint& z,
                                       double eta, double tol = -1.0);
PartialEnvelopeResult partial_moreau_y(const MinimaxProblem& p, const SplitPoint& z,
                                       double eta, double tol = -1.0);

}  // namespace saddle

#endif  // SADDLE_PROX_HPP
