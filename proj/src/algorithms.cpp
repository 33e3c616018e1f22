#include "saddle/algorithms.hpp"

#include <cmath>

#include "saddle/diagnostics.hpp"
#include "saddle/envelope.hpp"

namespace saddle {

std::string scheme_name(Scheme s) {
  switch (s) {
    case Scheme::kPpm: return "ppm";
    case Scheme::kPpm2: return "ppm2";
    case Scheme::kGda: return "gda";
    case Scheme::kGda2: return "gda2";
    case Scheme::kAgda: return "agda";
    case Scheme::kEgm: return "egm";
  }
  return "?";
}

Scheme scheme_from_name(const std::string& name) {
  if (name == "ppm") return Scheme::kPpm;
  if (name == "ppm2") return Scheme::kPpm2;
  if (name == "gda") return Scheme::kGda;
  if (name == "gda2") return Scheme::kGda2;
  if (name == "agda") return Scheme::kAgda;
  if (name == "egm") return Scheme::kEgm;
  throw ParameterError("unknown scheme '" + name + "'");
}

std::string termination_name(Termination t) {
  switch (t) {
    case Termination::kConverged: return "converged";
    case Termination::kDiverged: return "diverged";
    case Termination::kBudget: return "budget";
    case Termination::kError: return "error";
  }
  return "?";
}

namespace {

void check_damping(double v, const char* name) {
  if (!(v > 0.0 && v <= 1.0))
    throw ParameterError(std::string(name) + " must lie in (0, 1], got " +
                         std::to_string(v));
}

}  // namespace

SplitPoint ppm_step(const MinimaxProblem& p, const SplitPoint& z, double eta,
                    double lambda, double tol) {
  check_damping(lambda, "lambda");
  ProxResult r = prox(p, z, eta, tol);
  return {(1.0 - lambda) * z.x + lambda * r.z_plus.x,
          (1.0 - lambda) * z.y + lambda * r.z_plus.y};
}

SplitPoint ppm2_step(const MinimaxProblem& p, const SplitPoint& z, double eta,
                     double lambda, double gamma, double tol) {
  // The two-damping variant admits the closed interval: damping 0 freezes
  // that block. At least one block must move.
  if (!(lambda >= 0.0 && lambda <= 1.0) || !(gamma >= 0.0 && gamma <= 1.0))
    throw ParameterError("ppm2 damping must lie in [0, 1]");
  if (lambda == 0.0 && gamma == 0.0)
    throw ParameterError("ppm2 requires lambda or gamma to be positive");
  ProxResult r = prox(p, z, eta, tol);
  return {(1.0 - lambda) * z.x + lambda * r.z_plus.x,
          (1.0 - gamma) * z.y + gamma * r.z_plus.y};
}

SplitPoint gda_step(const MinimaxProblem& p, const SplitPoint& z, double s) {
  if (!(s > 0.0)) throw ParameterError("gda stepsize must be positive");
  return {z.x - s * p.grad_x(z), z.y + s * p.grad_y(z)};
}

Gda2Step gda2_step(const MinimaxProblem& p, const SplitPoint& z, double eta_x,
                   double eta_y, const Box& box) {
  if (!(eta_x > 0.0 && eta_y > 0.0))
    throw ParameterError("gda2 inverse stepsizes must be positive");
  Gda2Step out;
  out.z.x = z.x - p.grad_x(z) / eta_x;
  Eigen::VectorXd y = z.y + p.grad_y(z) / eta_y;
  out.z.y = box.clamp(y);
  out.clamped = (out.z.y - y).cwiseAbs().maxCoeff() > 0.0;
  return out;
}

SplitPoint agda_step(const MinimaxProblem& p, const SplitPoint& z, double s) {
  if (!(s > 0.0)) throw ParameterError("agda stepsize must be positive");
  Eigen::VectorXd x_next = z.x - s * p.grad_x(z);
  SplitPoint half{x_next, z.y};
  return {x_next, z.y + s * p.grad_y(half)};
}

SplitPoint egm_step(const MinimaxProblem& p, const SplitPoint& z, double s) {
  if (!(s > 0.0)) throw ParameterError("egm stepsize must be positive");
  SplitPoint mid{z.x - s * p.grad_x(z), z.y + s * p.grad_y(z)};
  return {z.x - s * p.grad_x(mid), z.y + s * p.grad_y(mid)};
}

Trajectory run(const MinimaxProblem& p, const AlgoConfig& cfg, const SplitPoint& z0) {
  p.check_dims(z0);
  if (cfg.max_iter < 0) throw ParameterError("max_iter must be nonnegative");
  switch (cfg.scheme) {
    case Scheme::kPpm:
    case Scheme::kPpm2:
      if (!(cfg.eta > p.rho()))
        throw ParameterError("PPM schemes require eta > rho");
      break;
    case Scheme::kGda:
    case Scheme::kAgda:
    case Scheme::kEgm:
      if (!(cfg.s > 0.0)) throw ParameterError("stepsize s must be positive");
      break;
    case Scheme::kGda2:
      if (!(cfg.eta_x > 0.0 && cfg.eta_y > 0.0))
        throw ParameterError("gda2 requires positive eta_x, eta_y");
      break;
  }

  const double grad_tol =
      cfg.grad_tol > 0.0 ? cfg.grad_tol : 1e-8 * std::max(1.0, p.grad_norm(z0));
  const double radius =
      cfg.diverge_radius > 0.0 ? cfg.diverge_radius : 1e8 * (1.0 + z0.norm());

  Trajectory t;
  t.config = cfg;
  t.termination = Termination::kBudget;

  const double inner_base = cfg.inner_tol > 0.0 ? cfg.inner_tol : 1e-10;
  auto inner_tol_at = [&](const SplitPoint& z) {
    return inner_base * std::max(1.0, t.grad_norm.empty() ? p.grad_norm(z)
                                                          : t.grad_norm.back());
  };

  auto record = [&](const SplitPoint& z, double step) {
    t.iterates.push_back(z);
    t.grad_norm.push_back(z.all_finite() ? p.grad_norm(z)
                                         : std::numeric_limits<double>::infinity());
    t.step_norm.push_back(step);
    const double tol = inner_base * std::max(1.0, t.grad_norm.back());
    if (cfg.record_lyapunov)
      t.lyapunov.push_back(lyapunov(p, z, cfg.eta, tol));
    if (cfg.record_envelope_grad) {
      ProxResult r = prox(p, z, cfg.eta, tol);
      t.envelope_grad_norm.push_back(cfg.eta * distance(z, r.z_plus));
    }
  };

  SplitPoint z = z0;
  record(z, 0.0);

  for (int k = 0; k < cfg.max_iter; ++k) {
    if (t.grad_norm.back() <= grad_tol) {
      t.termination = Termination::kConverged;
      return t;
    }
    if (!(z.norm() <= radius) || !z.all_finite()) {
      t.termination = Termination::kDiverged;
      return t;
    }
    SplitPoint next;
    try {
      switch (cfg.scheme) {
        case Scheme::kPpm:
          next = ppm_step(p, z, cfg.eta, cfg.lambda, inner_tol_at(z));
          break;
        case Scheme::kPpm2:
          next = ppm2_step(p, z, cfg.eta, cfg.lambda, cfg.gamma, inner_tol_at(z));
          break;
        case Scheme::kGda:
          next = gda_step(p, z, cfg.s);
          break;
        case Scheme::kGda2: {
          Gda2Step g = gda2_step(p, z, cfg.eta_x, cfg.eta_y, cfg.y_box);
          t.gda2_clamped = t.gda2_clamped || g.clamped;
          next = std::move(g.z);
          break;
        }
        case Scheme::kAgda:
          next = agda_step(p, z, cfg.s);
          break;
        case Scheme::kEgm:
          next = egm_step(p, z, cfg.s);
          break;
      }
    } catch (const Error& e) {
      t.termination = Termination::kError;
      t.error_message = e.what();
      return t;
    }
    record(next, distance(next, z));
    z = std::move(next);
  }

  if (t.grad_norm.back() <= grad_tol)
    t.termination = Termination::kConverged;
  else if (!(z.norm() <= radius) || !z.all_finite())
    t.termination = Termination::kDiverged;
  else
    t.termination = Termination::kBudget;
  return t;
}

}  // namespace saddle
