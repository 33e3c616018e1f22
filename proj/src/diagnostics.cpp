#include "saddle/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <unordered_map>

#include "saddle/envelope.hpp"
#include "saddle/numerics.hpp"

namespace saddle {

std::string regime_name(RegimeLabel::Tag tag) {
  switch (tag) {
    case RegimeLabel::Tag::kConverged: return "converged";
    case RegimeLabel::Tag::kCycle: return "cycle";
    case RegimeLabel::Tag::kDiverged: return "diverged";
    case RegimeLabel::Tag::kUndetermined: return "undetermined";
  }
  return "?";
}

double lyapunov(const MinimaxProblem& p, const SplitPoint& z, double eta,
                double tol) {
  PartialEnvelopeResult up = partial_moreau_y(p, z, eta, tol);
  PartialEnvelopeResult down = partial_moreau_x(p, z, eta, tol);
  // up.value = -e_eta{-L(x,.)}(y), down.value = e_eta{L(.,y)}(x)
  return up.value - down.value;
}

double lyapunov_recurrence_slack(const MinimaxProblem& p, const SplitPoint& z,
                                 double eta, double alpha, double tol) {
  ProxResult r = prox(p, z, eta, tol);
  const double sigma = 1.0 / (1.0 / eta - 1.0 / p.rho());
  const double lz = lyapunov(p, z, eta, tol);
  const double lzp = lyapunov(p, r.z_plus, eta, tol);
  const double d2 = std::pow(distance(r.z_plus, z), 2);
  return lz - lzp - 0.5 * (alpha + sigma) * d2;
}

namespace {

// Finds the closest pair (i, j), j - i >= min_lag, among the window points
// using a uniform grid hash of cell size `cell`. Pair checks are capped to
// stay linear-ish even when iterates pile up in one cell.
struct Recurrence {
  double dist = std::numeric_limits<double>::infinity();
  int lag = 0;
};

Recurrence best_recurrence(const std::vector<SplitPoint>& pts, double cell,
                           int min_lag) {
  struct Key {
    int64_t a, b;
    bool operator==(const Key& o) const { return a == o.a && b == o.b; }
  };
  struct KeyHash {
    size_t operator()(const Key& k) const {
      return std::hash<int64_t>()(k.a * 0x9e3779b97f4a7c15LL ^ k.b);
    }
  };
  // Project to the first two stacked coordinates for hashing; distances are
  // still computed in full dimension.
  auto coord = [&](const SplitPoint& z, int which) {
    return which == 0 ? z.x(0) : (z.x.size() > 1 ? z.x(1) : z.y(0));
  };
  std::unordered_map<Key, std::vector<int>, KeyHash> buckets;
  buckets.reserve(pts.size() * 2);
  Recurrence best;
  int64_t checks = 0;
  const int64_t check_cap = 50'000'000;
  for (int j = 0; j < static_cast<int>(pts.size()); ++j) {
    const auto kx = static_cast<int64_t>(std::floor(coord(pts[j], 0) / cell));
    const auto ky = static_cast<int64_t>(std::floor(coord(pts[j], 1) / cell));
    for (int64_t da = -1; da <= 1; ++da) {
      for (int64_t db = -1; db <= 1; ++db) {
        auto it = buckets.find(Key{kx + da, ky + db});
        if (it == buckets.end()) continue;
        for (int i : it->second) {
          if (j - i < min_lag) continue;
          if (++checks > check_cap) return best;
          const double d = distance(pts[j], pts[i]);
          if (d < best.dist) best = {d, j - i};
        }
      }
    }
    buckets[Key{kx, ky}].push_back(j);
  }
  return best;
}

}  // namespace

RegimeLabel classify(const Trajectory& t, double grad_tol, double cycle_tol,
                     int burn_in, int window) {
  if (t.iterates.empty()) throw ParameterError("classify: empty trajectory");
  RegimeLabel label;

  if (t.termination == Termination::kDiverged) {
    label.tag = RegimeLabel::Tag::kDiverged;
    return label;
  }
  if (t.final_grad_norm() <= grad_tol) {
    label.tag = RegimeLabel::Tag::kConverged;
    label.point = t.final_point();
    return label;
  }

  const int len = static_cast<int>(t.iterates.size());
  const int lo = std::max(burn_in, len - window);
  if (len - lo < 4) return label;  // not enough post-burn-in data

  std::vector<SplitPoint> w(t.iterates.begin() + lo, t.iterates.end());
  double mean_norm = 0.0, min_grad = std::numeric_limits<double>::infinity();
  double max_step = 0.0;
  for (int k = 0; k < static_cast<int>(w.size()); ++k) {
    mean_norm += w[k].norm();
    min_grad = std::min(min_grad, t.grad_norm[lo + k]);
    if (lo + k >= 1) max_step = std::max(max_step, t.step_norm[lo + k]);
  }
  mean_norm /= static_cast<double>(w.size());
  const double tol = cycle_tol > 0.0 ? cycle_tol : 1e-4 * (1.0 + mean_norm);

  // A cycle must keep moving and keep its gradient away from zero; a stalled
  // near-stationary tail stays Undetermined.
  if (min_grad <= grad_tol || max_step <= 2.0 * tol) return label;

  Recurrence rec = best_recurrence(w, tol, 2);
  if (rec.dist <= tol) {
    label.tag = RegimeLabel::Tag::kCycle;
    label.period_estimate = rec.lag;
    label.recurrence_dist = rec.dist;
    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(w[0].dim());
    for (const auto& z : w) centroid += z.stacked();
    centroid /= static_cast<double>(w.size());
    double ms = 0.0;
    for (const auto& z : w) ms += (z.stacked() - centroid).squaredNorm();
    label.radius_estimate = std::sqrt(ms / static_cast<double>(w.size()));
  }
  return label;
}

QuadraticOracle quadratic_oracle(double rho, double a, double eta, double lambda) {
  if (!(eta > rho)) throw ParameterError("quadratic_oracle: eta must exceed rho");
  QuadraticOracle q;
  q.alpha = -rho + a * a / (eta - rho);
  q.C = 1.0 - lambda * q.alpha / (eta + q.alpha);
  q.D = lambda * eta * a / ((eta + q.alpha) * (eta - rho));
  q.factor = q.C * q.C + q.D * q.D;
  q.cycles = std::abs(q.factor - 1.0) <= 1e-12;
  q.converges = q.factor < 1.0 && !q.cycles;
  return q;
}

namespace {

double min1_rate_term(double eta, double rho) {
  if (rho == 0.0) return 1.0;
  const double t = eta / rho - 1.0;
  return std::min(1.0, t * t);
}

}  // namespace

double lambda_bound_two_sided(double eta, double rho, double alpha) {
  if (!(eta > rho)) throw ParameterError("lambda_bound_two_sided: eta must exceed rho");
  if (!(alpha > 0.0)) throw ParameterError("lambda_bound_two_sided: alpha must be positive");
  return 2.0 * min1_rate_term(eta, rho) / (eta / alpha + 1.0);
}

double rate_two_sided(double eta, double lambda, double rho, double alpha) {
  if (!(eta > rho)) throw ParameterError("rate_two_sided: eta must exceed rho");
  if (!(alpha > 0.0)) throw ParameterError("rate_two_sided: alpha must be positive");
  if (lambda < 0.0 || lambda > lambda_bound_two_sided(eta, rho, alpha) + 1e-15)
    throw ParameterError("rate_two_sided: lambda outside the admissible bound");
  return 1.0 - 2.0 * lambda / (eta / alpha + 1.0) +
         lambda * lambda / min1_rate_term(eta, rho);
}

std::pair<double, double> suggest_one_sided_params(double eta, double rho,
                                                   double alpha,
                                                   double c_multiplier) {
  if (!(eta > rho)) throw ParameterError("suggest_one_sided_params: eta must exceed rho");
  if (!(alpha > 0.0)) throw ParameterError("suggest_one_sided_params: alpha must be positive");
  if (!(c_multiplier > 0.0))
    throw ParameterError("suggest_one_sided_params: c multiplier must be positive");
  const double q = rho == 0.0 ? 1.0 : std::min(1.0, std::abs(eta / rho - 1.0));
  const double denom = (1.0 + eta / alpha) * (1.0 + eta / alpha);
  auto clamp01 = [](double v) { return std::min(1.0, std::max(v, 1e-300)); };
  return {clamp01(c_multiplier * q * q * q / denom), clamp01(c_multiplier * q)};
}

namespace {

// Gradient descent with halving backtracking on one block; `sign` = +1
// minimizes, -1 maximizes. Budget counts objective evaluations.
Eigen::VectorXd block_descent(
    const std::function<double(const Eigen::VectorXd&)>& value,
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& grad,
    Eigen::VectorXd u, double sign, double t0, double tol, long budget) {
  long evals = 0;
  auto val = [&](const Eigen::VectorXd& v) {
    ++evals;
    return sign * value(v);
  };
  double fu = val(u);
  double t = t0;
  while (true) {
    Eigen::VectorXd g = sign * grad(u);
    const double gn = g.norm();
    if (gn <= tol) return u;
    bool accepted = false;
    for (int bt = 0; bt < 60 && evals < budget; ++bt) {
      Eigen::VectorXd cand = u - t * g;
      const double fc = val(cand);
      // Once the Armijo decrement sinks below the value's ulp the value
      // comparison is pure noise; from there only a shrinking gradient norm
      // counts as progress.
      const bool plateau =
          0.5 * t * gn * gn <= 1e-12 * std::max(1.0, std::abs(fu));
      const bool accept =
          std::isfinite(fc) &&
          (plateau ? (sign * grad(cand)).norm() <= (1.0 - 1e-6) * gn
                   : fc <= fu - 0.5 * t * gn * gn);
      if (accept) {
        u = std::move(cand);
        fu = fc;
        t *= 2.0;
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (evals >= budget)
      throw ConvergenceError("init_weak: evaluation budget exhausted at |g| = " +
                                 std::to_string(gn),
                             ProxResult{});
    if (!accepted)
      throw ConvergenceError("init_weak: backtracking stalled at |g| = " +
                                 std::to_string(gn),
                             ProxResult{});
  }
}

}  // namespace

SplitPoint init_weak(const MinimaxProblem& p, const SplitPoint& z_prime, double eta,
                     double tol) {
  p.check_dims(z_prime);
  if (!(tol > 0.0)) throw ParameterError("init_weak: tol must be positive");
  const double t0 = 1.0 / std::max(eta, 1e-12);
  const long budget = 50'000;

  auto fx = [&](const Eigen::VectorXd& u) { return p.value({u, z_prime.y}); };
  auto gx = [&](const Eigen::VectorXd& u) { return p.grad_x({u, z_prime.y}); };
  Eigen::VectorXd x0 = block_descent(fx, gx, z_prime.x, +1.0, t0, tol, budget);

  auto fy = [&](const Eigen::VectorXd& v) { return p.value({z_prime.x, v}); };
  auto gy = [&](const Eigen::VectorXd& v) { return p.grad_y({z_prime.x, v}); };
  Eigen::VectorXd y0 = block_descent(fy, gy, z_prime.y, -1.0, t0, tol, budget);

  return {x0, y0};
}

WeakRegimeReport weak_regime_check(const MinimaxProblem& p,
                                   const SplitPoint& z_prime, const SplitPoint& z0,
                                   double eta, double mu_local) {
  p.check_dims(z_prime);
  p.check_dims(z0);
  if (!(eta > p.rho())) throw ParameterError("weak_regime_check: eta must exceed rho");
  if (!p.hess_lipschitz() || !p.interaction_bound() || !p.interaction_lipschitz())
    throw ParameterError(
        "weak_regime_check: problem must carry H, delta and xi constants");
  const double H = *p.hess_lipschitz();
  const double delta = *p.interaction_bound();
  const double xi = *p.interaction_lipschitz();
  const double rho = p.rho(), beta = p.beta();

  WeakRegimeReport rep;
  rep.z0 = z0;
  rep.grad_norm_z0 = p.grad_norm(z0);

  double mu = mu_local;
  if (std::isnan(mu)) {
    // Smallest block curvature at the block-local optima, floored at zero.
    const double mx = sym_eig_min(p.hess_xx({z0.x, z_prime.y}));
    const double my = sym_eig_min((-p.hess_yy({z_prime.x, z0.y})).eval());
    mu = std::max(0.0, std::min(mx, my));
  }
  rep.mu = mu;

  const Eigen::MatrixXd B = p.hess_xy(z0);
  const double lx = sym_eig_min((B * B.transpose()).eval());
  const double ly = sym_eig_min((B.transpose() * B).eval());
  const double a0x = mu + lx / (eta + beta) - xi * (z0.y - z_prime.y).norm();
  const double a0y = mu + ly / (eta + beta) - xi * (z0.x - z_prime.x).norm();
  rep.alpha0 = std::min(a0x, a0y);
  rep.psd_ok = a0x > 0.0 && a0y > 0.0;
  if (!rep.psd_ok) return rep;  // no radii without a positive certificate

  const double a0 = rep.alpha0;
  const double g0 = rep.grad_norm_z0;
  rep.r = 4.0 * (eta + a0 / 2.0) * g0 / (a0 * (eta - rho));
  const double rcoef = 1.0 + 4.0 * std::sqrt(2.0) * (eta + a0 / 2.0) / a0 +
                       4.0 * std::sqrt(2.0) * beta * (eta + a0 / 2.0) /
                           (a0 * (eta - rho));
  rep.R = rcoef * g0 / (eta - rho);

  const double lip = H * (1.0 + 2.0 * delta / (eta - rho) +
                          delta * delta / ((eta - rho) * (eta - rho)));
  rep.local_ok =
      delta * distance(z0, z_prime) <= a0 * (eta - rho) / (2.0 * rcoef * lip);
  rep.lambda_max = 2.0 * min1_rate_term(eta, rho) / (2.0 * eta / a0 + 1.0);
  return rep;
}

}  // namespace saddle
