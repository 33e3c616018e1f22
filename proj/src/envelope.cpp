#include "saddle/envelope.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "saddle/numerics.hpp"

namespace saddle {

namespace {

void require_eta(const MinimaxProblem& p, double eta) {
  if (!(eta > p.rho()))
    throw ParameterError("envelope requires eta > rho, got eta = " +
                         std::to_string(eta) + ", rho = " + std::to_string(p.rho()));
}

double resolved_tol(const MinimaxProblem& p, const SplitPoint& z, double tol) {
  return tol > 0.0 ? tol : default_inner_tol(p, z);
}

}  // namespace

double envelope_value(const MinimaxProblem& p, const SplitPoint& z, double eta,
                      double tol) {
  require_eta(p, eta);
  ProxResult r = prox(p, z, eta, tol);
  return p.value(r.z_plus) + 0.5 * eta * (r.z_plus.x - z.x).squaredNorm() -
         0.5 * eta * (r.z_plus.y - z.y).squaredNorm();
}

EnvelopeGradient envelope_grad(const MinimaxProblem& p, const SplitPoint& z,
                               double eta, double tol) {
  require_eta(p, eta);
  const double t = resolved_tol(p, z, tol);
  ProxResult r = prox(p, z, eta, t);
  EnvelopeGradient g;
  g.x = eta * (z.x - r.z_plus.x);
  g.y = eta * (r.z_plus.y - z.y);
  g.check_x = p.grad_x(r.z_plus);
  g.check_y = p.grad_y(r.z_plus);
  const double gap =
      std::hypot((g.x - g.check_x).norm(), (g.y - g.check_y).norm());
  if (!(gap <= 10.0 * t))
    throw ConsistencyError("envelope gradient routes disagree by " +
                           std::to_string(gap) + " (allowed " +
                           std::to_string(10.0 * t) + ")");
  g.prox = std::move(r);
  return g;
}

EnvelopeHessian envelope_hessian(const MinimaxProblem& p, const SplitPoint& z,
                                 double eta, double tol) {
  require_eta(p, eta);
  ProxResult r = prox(p, z, eta, tol);
  const SplitPoint& zp = r.z_plus;
  const Eigen::Index n = p.dim_x(), m = p.dim_y();

  const Eigen::MatrixXd A = p.hess_xx(zp);
  const Eigen::MatrixXd B = p.hess_xy(zp);
  const Eigen::MatrixXd C = p.hess_yy(zp);

  // Full formula on the sign-flipped matrix: E = eta I - eta^2 (eta I + W)^{-1}
  // with W = [A, B; -B^T, -C]. E carries the envelope blocks as
  // [xx, xy; -yx, -yy].
  Eigen::MatrixXd W(n + m, n + m);
  W.topLeftCorner(n, n) = A;
  W.topRightCorner(n, m) = B;
  W.bottomLeftCorner(m, n) = -B.transpose();
  W.bottomRightCorner(m, m) = -C;
  Eigen::MatrixXd shifted = W + eta * Eigen::MatrixXd::Identity(n + m, n + m);
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(shifted);
  Eigen::MatrixXd inv = lu.solve(Eigen::MatrixXd::Identity(n + m, n + m));
  if (!inv.allFinite())
    throw SingularMatrixError("envelope_hessian: eta I + J(z+) not invertible");
  Eigen::MatrixXd E =
      eta * Eigen::MatrixXd::Identity(n + m, n + m) - eta * eta * inv;

  EnvelopeHessian h;
  h.xx = E.topLeftCorner(n, n);
  h.xy = E.topRightCorner(n, m);
  h.yy = -E.bottomRightCorner(m, m);

  // Schur-complement block routes; must match the full computation.
  const Eigen::MatrixXd In = Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd Im = Eigen::MatrixXd::Identity(m, m);
  const Eigen::MatrixXd yres = (eta * Im - C).lu().solve(B.transpose());
  const Eigen::MatrixXd xx_schur =
      eta * In - eta * eta * (eta * In + A + B * yres).lu().solve(In);
  const Eigen::MatrixXd xres = (eta * In + A).lu().solve(B);
  const Eigen::MatrixXd yy_schur =
      -eta * Im +
      eta * eta * (eta * Im - C + B.transpose() * xres).lu().solve(Im);
  const double dxx = (h.xx - xx_schur).cwiseAbs().maxCoeff();
  const double dyy = (h.yy - yy_schur).cwiseAbs().maxCoeff();
  if (!(dxx <= 1e-8 && dyy <= 1e-8))
    throw ConsistencyError(
        "envelope_hessian: Schur and full-matrix routes disagree (xx " +
        std::to_string(dxx) + ", yy " + std::to_string(dyy) + ")");

  h.xx = 0.5 * (h.xx + h.xx.transpose().eval());
  h.yy = 0.5 * (h.yy + h.yy.transpose().eval());
  h.prox = std::move(r);
  return h;
}

DominanceReport dominance(const MinimaxProblem& p, const SplitPoint& z, double eta) {
  require_eta(p, eta);
  p.check_dims(z);
  const Eigen::Index n = p.dim_x(), m = p.dim_y();
  const Eigen::MatrixXd A = p.hess_xx(z);
  const Eigen::MatrixXd B = p.hess_xy(z);
  const Eigen::MatrixXd C = p.hess_yy(z);
  const Eigen::MatrixXd In = Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd Im = Eigen::MatrixXd::Identity(m, m);

  // eta I - C >= (eta - rho) I > 0 and eta I + A likewise on the domain of
  // validity; LU keeps the solve robust when queried outside it.
  Eigen::MatrixXd Mx = A + B * (eta * Im - C).lu().solve(B.transpose());
  Eigen::MatrixXd My = -C + B.transpose() * (eta * In + A).lu().solve(B);
  Mx = 0.5 * (Mx + Mx.transpose().eval());
  My = 0.5 * (My + My.transpose().eval());

  DominanceReport rep;
  rep.alpha_x = sym_eig_min(Mx);
  rep.alpha_y = sym_eig_min(My);
  rep.eta = eta;
  rep.z = z;
  return rep;
}

BoxDominance dominance_over_box(const MinimaxProblem& p, const Box& box, double eta,
                                int grid) {
  require_eta(p, eta);
  if (grid < 2) throw ParameterError("dominance_over_box: grid must be >= 2");

  const Eigen::Index d = p.dim_x() + p.dim_y();
  BoxDominance out;
  out.certified = p.constant_hessian();
  if (out.certified) {
    SplitPoint center{
        Eigen::VectorXd::Constant(p.dim_x(), 0.5 * (box.lo + box.hi)),
        Eigen::VectorXd::Constant(p.dim_y(), 0.5 * (box.lo + box.hi))};
    DominanceReport rep = dominance(p, center, eta);
    out.alpha_x = rep.alpha_x;
    out.alpha_y = rep.alpha_y;
    return out;
  }

  double total = std::pow(static_cast<double>(grid), static_cast<double>(d));
  if (total > 4e6)
    throw ParameterError("dominance_over_box: grid^dim too large (" +
                         std::to_string(total) + " samples)");

  out.alpha_x = std::numeric_limits<double>::infinity();
  out.alpha_y = std::numeric_limits<double>::infinity();
  std::vector<int> idx(d, 0);
  Eigen::VectorXd v(d);
  while (true) {
    for (Eigen::Index k = 0; k < d; ++k)
      v(k) = box.lo + (box.hi - box.lo) * idx[k] / (grid - 1);
    DominanceReport rep =
        dominance(p, SplitPoint::from_stacked(v, p.dim_x()), eta);
    out.alpha_x = std::min(out.alpha_x, rep.alpha_x);
    out.alpha_y = std::min(out.alpha_y, rep.alpha_y);
    Eigen::Index k = 0;
    for (; k < d; ++k) {
      if (++idx[k] < grid) break;
      idx[k] = 0;
    }
    if (k == d) break;
  }
  return out;
}

CurvatureBounds curvature_bounds(double eta, double rho, double alpha) {
  if (!(eta > rho))
    throw ParameterError("curvature_bounds: eta must exceed rho");
  if (alpha == -eta)
    throw ParameterError("curvature_bounds: alpha = -eta is a pole");
  CurvatureBounds b;
  // Harmonic mean eta*alpha/(eta+alpha); the alpha = 0 limit is 0, and the
  // alpha -> infinity limit is eta.
  b.mu_env = std::isinf(alpha) ? eta : eta * alpha / (eta + alpha);
  if (rho == 0.0) {
    b.beta_env = eta;  // convex-concave case: the envelope is eta-smooth
  } else {
    b.beta_env = std::max(eta, 1.0 / std::abs(1.0 / eta - 1.0 / rho));
  }
  return b;
}

}  // namespace saddle
