#ifndef SADDLE_ALGORITHMS_HPP
#define SADDLE_ALGORITHMS_HPP

#include <string>
#include <vector>

#include "saddle/prox.hpp"

namespace saddle {

enum class Scheme { kPpm, kPpm2, kGda, kGda2, kAgda, kEgm };

std::string scheme_name(Scheme s);
Scheme scheme_from_name(const std::string& name);

struct AlgoConfig {
  Scheme scheme = Scheme::kPpm;
  double eta = 0.0;     // proximal parameter (PPM schemes)
  double lambda = 1.0;  // damping in (0,1] (PPM); x-damping in [0,1] (PPM2)
  double gamma = 1.0;   // y-damping in [0,1] (PPM2); not both dampings zero
  double s = 0.0;       // stepsize (GDA/AGDA/EGM)
  double eta_x = 0.0;   // inverse stepsizes (GDA2)
  double eta_y = 0.0;
  Box y_box{-1e6, 1e6};  // projection box for GDA2's y-block
  int max_iter = 10000;
  double grad_tol = -1.0;        // <= 0: 1e-8 * max(1, |grad L(z0)|)
  double diverge_radius = -1.0;  // <= 0: 1e8 * (1 + |z0|)
  // Base proximal tolerance; each step solves to
  // inner_tol * max(1, |grad L(z_k)|) so the residual tracks the iterate
  // scale. <= 0 selects the 1e-10 default.
  double inner_tol = -1.0;
  bool record_lyapunov = false;
  bool record_envelope_grad = false;
};

enum class Termination { kConverged, kDiverged, kBudget, kError };

std::string termination_name(Termination t);

struct Trajectory {
  std::vector<SplitPoint> iterates;
  std::vector<double> grad_norm;  // same length as iterates
  std::vector<double> step_norm;  // step_norm[0] = 0
  std::vector<double> lyapunov;   // empty unless recorded
  std::vector<double> envelope_grad_norm;  // empty unless recorded
  AlgoConfig config;
  Termination termination = Termination::kBudget;
  std::string error_message;
  bool gda2_clamped = false;  // projection activated at least once

  const SplitPoint& final_point() const { return iterates.back(); }
  double final_grad_norm() const { return grad_norm.back(); }
  int steps() const { return static_cast<int>(iterates.size()) - 1; }
};

// One damped proximal step (1-lambda) z + lambda prox_eta(z).
SplitPoint ppm_step(const MinimaxProblem& p, const SplitPoint& z, double eta,
                    double lambda, double tol = -1.0);

// Two-damping variant: x-block damped by lambda, y-block by gamma.
SplitPoint ppm2_step(const MinimaxProblem& p, const SplitPoint& z, double eta,
                     double lambda, double gamma, double tol = -1.0);

// Simultaneous gradient descent ascent with stepsize s.
SplitPoint gda_step(const MinimaxProblem& p, const SplitPoint& z, double s);

struct Gda2Step {
  SplitPoint z;
  bool clamped = false;
};

// Two-stepsize GDA: x - grad_x/eta_x, y + grad_y/eta_y with the y-block
// clamped into `box`.
Gda2Step gda2_step(const MinimaxProblem& p, const SplitPoint& z, double eta_x,
                   double eta_y, const Box& box);

// Alternating GDA: the y-update sees the already-updated x.
SplitPoint agda_step(const MinimaxProblem& p, const SplitPoint& z, double s);

// Extragradient: half-step along the field, then a full step evaluated there.
SplitPoint egm_step(const MinimaxProblem& p, const SplitPoint& z, double s);

// Iterates the configured scheme from z0 until the gradient tolerance is met
// (Converged), the iterate norm exceeds diverge_radius (Diverged), or
// max_iter steps have been taken (Budget). Step errors are captured in the
// trajectory rather than propagated.
Trajectory run(const MinimaxProblem& p, const AlgoConfig& cfg, const SplitPoint& z0);

}  // namespace saddle

#endif  // SADDLE_ALGORITHMS_HPP
