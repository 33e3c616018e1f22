#ifndef SADDLE_PROBLEMS_HPP
#define SADDLE_PROBLEMS_HPP

#include <Eigen/Core>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "saddle/split_point.hpp"

namespace saddle {

// A smooth minimax objective L(x, y) with analytic first and second
// derivatives and certified curvature constants. Implementations are
// immutable after construction; every evaluation is pure, so instances can be
// shared freely across threads.
//
// rho()  : weak convexity-concavity bound, hess_xx >= -rho I and
//          -hess_yy >= -rho I on the domain of validity (negative rho means
//          strongly convex-strongly concave).
// beta() : bound on the spectral norm of the full Hessian on the same domain.
// The optional constants hess_lipschitz (H), interaction_bound (delta) and
// interaction_lipschitz (xi) feed the weak-interaction analysis.
class MinimaxProblem {
 public:
  virtual ~MinimaxProblem() = default;

  virtual Eigen::Index dim_x() const = 0;
  virtual Eigen::Index dim_y() const = 0;

  virtual double value(const SplitPoint& z) const = 0;
  virtual Eigen::VectorXd grad_x(const SplitPoint& z) const = 0;
  virtual Eigen::VectorXd grad_y(const SplitPoint& z) const = 0;
  virtual Eigen::MatrixXd hess_xx(const SplitPoint& z) const = 0;
  virtual Eigen::MatrixXd hess_yy(const SplitPoint& z) const = 0;
  virtual Eigen::MatrixXd hess_xy(const SplitPoint& z) const = 0;

  virtual double rho() const = 0;
  virtual double beta() const = 0;

  virtual std::optional<double> hess_lipschitz() const { return std::nullopt; }
  virtual std::optional<double> interaction_bound() const { return std::nullopt; }
  virtual std::optional<double> interaction_lipschitz() const { return std::nullopt; }

  // Box on which rho/beta are certified; nullopt means global.
  virtual std::optional<Box> domain() const { return std::nullopt; }

  // True when the Hessian does not depend on z, so pointwise eigenvalue
  // statements are global certificates.
  virtual bool constant_hessian() const { return false; }

  Eigen::MatrixXd hess_yx(const SplitPoint& z) const {
    return hess_xy(z).transpose();
  }

  Eigen::VectorXd grad(const SplitPoint& z) const {
    Eigen::VectorXd g(dim_x() + dim_y());
    g << grad_x(z), grad_y(z);
    return g;
  }
  double grad_norm(const SplitPoint& z) const { return grad(z).norm(); }

  // The monotone vector field F(z) = (grad_x L, -grad_y L) whose zeros are
  // the stationary points, and its Jacobian [xx, xy; -yx, -yy].
  Eigen::VectorXd field(const SplitPoint& z) const;
  Eigen::MatrixXd field_jacobian(const SplitPoint& z) const;

  // Full symmetric Hessian [xx, xy; yx, yy].
  Eigen::MatrixXd hessian(const SplitPoint& z) const;

  void check_dims(const SplitPoint& z) const;
};

// The rotational quadratic family
//   L(x, y) = (-rho/2)|x|^2 + a x^T y + (rho/2)|y|^2
// with its unique stationary point at the origin. Constant Hessian, so all
// curvature statements are global. Its interaction dominance at parameter
// eta is alpha = -rho + a^2/(eta - rho) in both x and y.
class RotationalQuadratic : public MinimaxProblem {
 public:
  RotationalQuadratic(double rho, double a, Eigen::Index n = 1);

  Eigen::Index dim_x() const override { return n_; }
  Eigen::Index dim_y() const override { return n_; }
  double value(const SplitPoint& z) const override;
  Eigen::VectorXd grad_x(const SplitPoint& z) const override;
  Eigen::VectorXd grad_y(const SplitPoint& z) const override;
  Eigen::MatrixXd hess_xx(const SplitPoint& z) const override;
  Eigen::MatrixXd hess_yy(const SplitPoint& z) const override;
  Eigen::MatrixXd hess_xy(const SplitPoint& z) const override;
  double rho() const override { return rho_; }
  double beta() const override;
  std::optional<double> hess_lipschitz() const override { return 0.0; }
  std::optional<double> interaction_bound() const override { return std::abs(a_); }
  std::optional<double> interaction_lipschitz() const override { return 0.0; }
  bool constant_hessian() const override { return true; }

  double a() const { return a_; }
  double alpha(double eta) const { return -rho_ + a_ * a_ / (eta - rho_); }

 private:
  double rho_;
  double a_;
  Eigen::Index n_;
};

// Polynomial in one variable, coefficients in ascending-degree order.
class Polynomial {
 public:
  Polynomial();  // the zero polynomial
  explicit Polynomial(std::vector<double> coeffs);

  double operator()(double t) const;
  // Derivative; constants share a static zero polynomial.
  const Polynomial& deriv() const;
  const std::vector<double>& coeffs() const { return c_; }
  bool zero() const;

  // max |p(t)| over [lo, hi] by dense sampling plus the endpoints.
  double max_abs_on(double lo, double hi) const;

 private:
  std::vector<double> c_;
  std::shared_ptr<Polynomial> d1_;  // null for constants; shared so copies stay cheap
};

// Separable-plus-bilinear objective
//   L(x, y) = sum_i f(x_i) + x^T A y - sum_j g(y_j)
// with coordinatewise polynomials f and g. Curvature constants are certified
// on a declared box only (polynomials have unbounded curvature globally).
class CoupledSeparable : public MinimaxProblem {
 public:
  struct Constants {
    double rho;
    double beta;
    Box box;
    std::optional<double> hess_lipschitz;
    std::optional<double> interaction_bound;
    std::optional<double> interaction_lipschitz;
  };

  CoupledSeparable(Polynomial f, Polynomial g, Eigen::MatrixXd A, Constants c);

  Eigen::Index dim_x() const override { return A_.rows(); }
  Eigen::Index dim_y() const override { return A_.cols(); }
  double value(const SplitPoint& z) const override;
  Eigen::VectorXd grad_x(const SplitPoint& z) const override;
  Eigen::VectorXd grad_y(const SplitPoint& z) const override;
  Eigen::MatrixXd hess_xx(const SplitPoint& z) const override;
  Eigen::MatrixXd hess_yy(const SplitPoint& z) const override;
  Eigen::MatrixXd hess_xy(const SplitPoint& z) const override;
  double rho() const override { return constants_.rho; }
  double beta() const override { return constants_.beta; }
  std::optional<double> hess_lipschitz() const override {
    return constants_.hess_lipschitz;
  }
  std::optional<double> interaction_bound() const override {
    return constants_.interaction_bound;
  }
  std::optional<double> interaction_lipschitz() const override {
    return constants_.interaction_lipschitz;
  }
  std::optional<Box> domain() const override { return constants_.box; }

  const Polynomial& f() const { return f_; }
  const Polynomial& g() const { return g_; }
  const Eigen::MatrixXd& A() const { return A_; }

 private:
  Polynomial f_, g_;
  Eigen::MatrixXd A_;
  Constants constants_;
};

// The two-dimensional quartic instance behind the converge/cycle/diverge
// landscape: f(x) = g(x) = (x+3)(x+1)(x-1)(x-3), interaction a x y,
// certified rho = 20 and beta = 172 + |a| on the box [-4, 4]^2.
std::shared_ptr<CoupledSeparable> make_figure1_problem(double a);

// Finite-difference step policy: h = max(1, |t|) * scale, with separate
// scales for gradient (eps^(1/3)) and Hessian (eps^(1/4)) stencils.
struct FdPolicy {
  double grad_scale;
  double hess_scale;
  FdPolicy();
};

// Wraps a plain value function with central-difference derivatives. The
// curvature constants cannot be inferred from a black box, so callers that
// need them (prox, envelopes) must supply rho and beta explicitly.
class FiniteDiffProblem : public MinimaxProblem {
 public:
  using ValueFn = std::function<double(const SplitPoint&)>;

  FiniteDiffProblem(ValueFn fn, Eigen::Index n, Eigen::Index m,
                    FdPolicy policy = {}, double rho = 0.0, double beta = 1.0);

  Eigen::Index dim_x() const override { return n_; }
  Eigen::Index dim_y() const override { return m_; }
  double value(const SplitPoint& z) const override;
  Eigen::VectorXd grad_x(const SplitPoint& z) const override;
  Eigen::VectorXd grad_y(const SplitPoint& z) const override;
  Eigen::MatrixXd hess_xx(const SplitPoint& z) const override;
  Eigen::MatrixXd hess_yy(const SplitPoint& z) const override;
  Eigen::MatrixXd hess_xy(const SplitPoint& z) const override;
  double rho() const override { return rho_; }
  double beta() const override { return beta_; }

 private:
  double eval(const SplitPoint& z) const;  // throws EvaluationError on non-finite

  ValueFn fn_;
  Eigen::Index n_, m_;
  FdPolicy policy_;
  double rho_, beta_;
};

// Finite-difference view of an existing problem (same value, FD derivatives,
// same constants). Used to cross-check analytic derivatives.
std::shared_ptr<FiniteDiffProblem> finite_diff_wrap(
    std::shared_ptr<const MinimaxProblem> p, FdPolicy policy = {});

// Constructs a problem by name ("figure1" or "quadratic") and parameter map,
// the interface the experiment config file goes through.
std::shared_ptr<MinimaxProblem> make_problem(
    const std::string& name, const std::map<std::string, double>& params);

}  // namespace saddle

#endif  // SADDLE_PROBLEMS_HPP
