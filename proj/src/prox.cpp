#include "saddle/prox.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace saddle {

namespace {

void require_eta(const MinimaxProblem& p, double eta) {
  if (!(eta > p.rho()))
    throw ParameterError("proximal parameter eta = " + std::to_string(eta) +
                         " must exceed rho = " + std::to_string(p.rho()));
}

double resolve_tol(const MinimaxProblem& p, const SplitPoint& z, double tol) {
  return tol > 0.0 ? tol : default_inner_tol(p, z);
}

bool finite_norm(double v) { return std::isfinite(v); }

}  // namespace

double default_inner_tol(const MinimaxProblem& p, const SplitPoint& z) {
  return 1e-10 * std::max(1.0, p.grad_norm(z));
}

ProxResult inner_solve(const MinimaxProblem& p, const SplitPoint& center,
                       double eta, const InnerOptions& opts) {
  require_eta(p, eta);
  p.check_dims(center);
  const double tol = resolve_tol(p, center, opts.tol);
  const Eigen::Index n = p.dim_x(), m = p.dim_y();

  const double mu = eta - p.rho();
  const double beta_hat = p.beta() + eta;
  const double s_gda = mu / (beta_hat * beta_hat);

  SplitPoint w = opts.start ? *opts.start : center;
  p.check_dims(w);

  // Gradient of the subproblem objective M, in field form (F_x, -F_y flips
  // already applied): G = (grad_x L + eta (u - x), -(grad_y L - eta (v - y))).
  auto subgrad = [&](const SplitPoint& u) -> Eigen::VectorXd {
    Eigen::VectorXd g(n + m);
    g.head(n) = p.grad_x(u) + eta * (u.x - center.x);
    g.tail(m) = -(p.grad_y(u) - eta * (u.y - center.y));
    return g;
  };

  Eigen::VectorXd G = subgrad(w);
  double res = G.norm();
  int iters = 0;
  SplitPoint best = w;
  double best_res = res;

  const Eigen::MatrixXd Id = Eigen::MatrixXd::Identity(n + m, n + m);

  while (true) {
    if (opts.trace) opts.trace->push_back(w);
    if (finite_norm(res) && res <= tol)
      return {w, res, iters, eta};
    if (iters >= opts.max_iter)
      throw ConvergenceError(
          "inner_solve: budget of " + std::to_string(opts.max_iter) +
              " iterations exhausted at residual " + std::to_string(best_res),
          ProxResult{best, best_res, iters, eta});
    ++iters;

    bool stepped = false;
    if (opts.method != InnerMethod::kGda && finite_norm(res)) {
      // Newton on G(w) = 0. The Jacobian eta I + [xx, xy; -yx, -yy] has
      // symmetric part >= (eta - rho) I, hence is always nonsingular.
      Eigen::MatrixXd J = p.field_jacobian(w);
      J += eta * Id;
      Eigen::PartialPivLU<Eigen::MatrixXd> lu(J);
      Eigen::VectorXd d = lu.solve(-G);
      if (d.allFinite()) {
        double t = 1.0;
        for (int bt = 0; bt < 60; ++bt) {
          SplitPoint wt{w.x + t * d.head(n), w.y + t * d.tail(m)};
          Eigen::VectorXd Gt = subgrad(wt);
          const double rt = Gt.norm();
          if (finite_norm(rt) && rt < (1.0 - 1e-4 * t) * res) {
            w = wt;
            G = std::move(Gt);
            res = rt;
            stepped = true;
            break;
          }
          t *= 0.5;
        }
      }
      if (!stepped && opts.method == InnerMethod::kNewton)
        throw ConvergenceError("inner_solve: Newton stalled at residual " +
                                   std::to_string(res),
                               ProxResult{best, best_res, iters, eta});
    }
    if (!stepped) {
      // Certified fallback: the gradient step contracts the distance to the
      // unique solution by sqrt(1 - 2 mu s + (beta+eta)^2 s^2) per iteration.
      w.x -= s_gda * G.head(n);
      w.y -= s_gda * G.tail(m);
      G = subgrad(w);
      res = G.norm();
    }
    if (finite_norm(res) && res < best_res) {
      best = w;
      best_res = res;
    }
  }
}

ProxResult prox(const MinimaxProblem& p, const SplitPoint& z, double eta,
                double tol) {
  InnerOptions opts;
  opts.tol = tol;
  return inner_solve(p, z, eta, opts);
}

namespace {

// Shared Newton loop for the two single-block strongly convex subproblems.
// Minimizes psi over u with grad/hess callbacks; psi'' >= (eta - rho) I.
struct BlockSolve {
  Eigen::VectorXd arg;
  double residual;
};

BlockSolve solve_block(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& grad,
                       const std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>& hess,
                       Eigen::VectorXd u0, double mu, double beta_hat, double tol,
                       int max_iter) {
  Eigen::VectorXd u = std::move(u0);
  Eigen::VectorXd g = grad(u);
  double res = g.norm();
  Eigen::VectorXd best = u;
  double best_res = res;
  const double s_fallback = mu / (beta_hat * beta_hat);

  for (int it = 0; it < max_iter; ++it) {
    if (std::isfinite(res) && res <= tol) return {u, res};
    bool stepped = false;
    if (std::isfinite(res)) {
      Eigen::MatrixXd H = hess(u);
      Eigen::LLT<Eigen::MatrixXd> llt(H);
      if (llt.info() == Eigen::Success) {
        Eigen::VectorXd d = llt.solve(-g);
        double t = 1.0;
        for (int bt = 0; bt < 60; ++bt) {
          Eigen::VectorXd ut = u + t * d;
          Eigen::VectorXd gt = grad(ut);
          const double rt = gt.norm();
          if (std::isfinite(rt) && rt < (1.0 - 1e-4 * t) * res) {
            u = std::move(ut);
            g = std::move(gt);
            res = rt;
            stepped = true;
            break;
          }
          t *= 0.5;
        }
      }
    }
    if (!stepped) {
      u -= s_fallback * g;
      g = grad(u);
      res = g.norm();
    }
    if (std::isfinite(res) && res < best_res) {
      best = u;
      best_res = res;
    }
  }
  if (std::isfinite(res) && res <= tol) return {u, res};
  throw ConvergenceError("partial Moreau solve: budget exhausted at residual " +
                             std::to_string(best_res),
                         ProxResult{SplitPoint{}, best_res, max_iter, 0.0});
}

}  // namespace

PartialEnvelopeResult partial_moreau_x(const MinimaxProblem& p, const SplitPoint& z,
                                       double eta, double tol) {
  require_eta(p, eta);
  p.check_dims(z);
  const double t = resolve_tol(p, z, tol);
  const double mu = eta - p.rho(), beta_hat = p.beta() + eta;
  const Eigen::Index n = p.dim_x();
  const Eigen::MatrixXd Id = Eigen::MatrixXd::Identity(n, n);

  auto grad = [&](const Eigen::VectorXd& u) -> Eigen::VectorXd {
    return p.grad_x({u, z.y}) + eta * (u - z.x);
  };
  auto hess = [&](const Eigen::VectorXd& u) -> Eigen::MatrixXd {
    return p.hess_xx({u, z.y}) + eta * Id;
  };
  BlockSolve s = solve_block(grad, hess, z.x, mu, beta_hat, t, 10000);
  const double value =
      p.value({s.arg, z.y}) + 0.5 * eta * (s.arg - z.x).squaredNorm();
  return {value, s.arg, s.residual};
}

PartialEnvelopeResult partial_moreau_y(const MinimaxProblem& p, const SplitPoint& z,
                                       double eta, double tol) {
  require_eta(p, eta);
  p.check_dims(z);
  const double t = resolve_tol(p, z, tol);
  const double mu = eta - p.rho(), beta_hat = p.beta() + eta;
  const Eigen::Index m = p.dim_y();
  const Eigen::MatrixXd Id = Eigen::MatrixXd::Identity(m, m);

  // Maximize L(x, v) - (eta/2)|v-y|^2 by minimizing its negation.
  auto grad = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd {
    return -p.grad_y({z.x, v}) + eta * (v - z.y);
  };
  auto hess = [&](const Eigen::VectorXd& v) -> Eigen::MatrixXd {
    return -p.hess_yy({z.x, v}) + eta * Id;
  };
  BlockSolve s = solve_block(grad, hess, z.y, mu, beta_hat, t, 10000);
  const double value =
      p.value({z.x, s.arg}) - 0.5 * eta * (s.arg - z.y).squaredNorm();
  return {value, s.arg, s.residual};
}

}  // namespace saddle
