#ifndef SADDLE_ENVELOPE_HPP
#define SADDLE_ENVELOPE_HPP

#include "saddle/prox.hpp"

namespace saddle {

// Pointwise interaction-dominance certificate at z:
//   alpha_x = lambda_min( hess_xx + hess_xy (eta I - hess_yy)^{-1} hess_yx )
//   alpha_y = lambda_min( -hess_yy + hess_yx (eta I + hess_xx)^{-1} hess_xy )
// Both are >= -rho since the added term is positive semidefinite.
struct DominanceReport {
  double alpha_x = 0.0;
  double alpha_y = 0.0;
  double eta = 0.0;
  SplitPoint z;
};

// Infimum of the pointwise dominance over a sample grid. `certified` is true
// only for constant-Hessian problems, where one evaluation is a global
// certificate; otherwise this is a lower-confidence estimate.
struct BoxDominance {
  double alpha_x = 0.0;
  double alpha_y = 0.0;
  bool certified = false;
};

// Envelope curvature constants from the dominance and smoothing analysis:
//   mu_env   = (eta^{-1} + alpha^{-1})^{-1}   (0 at alpha = 0; sign follows alpha)
//   beta_env = max{ eta, |eta^{-1} - rho^{-1}|^{-1} }
struct CurvatureBounds {
  double mu_env = 0.0;
  double beta_env = 0.0;
};

struct EnvelopeGradient {
  Eigen::VectorXd x;        // eta (x - x_plus)
  Eigen::VectorXd y;        // eta (y_plus - y)
  Eigen::VectorXd check_x;  // grad_x L(z_plus), the independent route
  Eigen::VectorXd check_y;  // grad_y L(z_plus)
  ProxResult prox;
};

struct EnvelopeHessian {
  Eigen::MatrixXd xx;
  Eigen::MatrixXd xy;  // yx block is xy^T
  Eigen::MatrixXd yy;
  ProxResult prox;
};

// Saddle-envelope value L_eta(z) = L(z+) + (eta/2)|x+-x|^2 - (eta/2)|y+-y|^2.
double envelope_value(const MinimaxProblem& p, const SplitPoint& z, double eta,
                      double tol = -1.0);

// Gradient (eta(x-x+), eta(y+-y)); also evaluates grad L(z+) and throws
// ConsistencyError if the two routes disagree beyond 10x the inner tolerance.
EnvelopeGradient envelope_grad(const MinimaxProblem& p, const SplitPoint& z,
                               double eta, double tol = -1.0);

// Hessian blocks of the envelope, from the full sign-flipped formula
//   eta I - eta^2 (eta I + [xx, xy; -yx, -yy](z+))^{-1},
// cross-checked against the two Schur-complement block formulas (throws
// ConsistencyError on disagreement beyond 1e-8).
EnvelopeHessian envelope_hessian(const MinimaxProblem& p, const SplitPoint& z,
                                 double eta, double tol = -1.0);

DominanceReport dominance(const MinimaxProblem& p, const SplitPoint& z, double eta);

// grid >= 2 samples per axis over box^(dim_x+dim_y); constant-Hessian
// problems are evaluated once.
BoxDominance dominance_over_box(const MinimaxProblem& p, const Box& box, double eta,
                                int grid);

// Throws ParameterError at the alpha = -eta pole or when eta <= rho.
CurvatureBounds curvature_bounds(double eta, double rho, double alpha);

}  // namespace saddle

#endif  // SADDLE_ENVELOPE_HPP
