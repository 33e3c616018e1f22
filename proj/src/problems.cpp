#include "saddle/problems.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "saddle/errors.hpp"
#include "saddle/numerics.hpp"

namespace saddle {

void MinimaxProblem::check_dims(const SplitPoint& z) const {
  if (z.x.size() != dim_x() || z.y.size() != dim_y())
    throw ParameterError("point dimensions (" + std::to_string(z.x.size()) + "," +
                         std::to_string(z.y.size()) + ") do not match problem (" +
                         std::to_string(dim_x()) + "," + std::to_string(dim_y()) + ")");
}

Eigen::VectorXd MinimaxProblem::field(const SplitPoint& z) const {
  Eigen::VectorXd f(dim_x() + dim_y());
  f << grad_x(z), -grad_y(z);
  return f;
}

Eigen::MatrixXd MinimaxProblem::field_jacobian(const SplitPoint& z) const {
  const Eigen::Index n = dim_x(), m = dim_y();
  Eigen::MatrixXd J(n + m, n + m);
  const Eigen::MatrixXd B = hess_xy(z);
  J.topLeftCorner(n, n) = hess_xx(z);
  J.topRightCorner(n, m) = B;
  J.bottomLeftCorner(m, n) = -B.transpose();
  J.bottomRightCorner(m, m) = -hess_yy(z);
  return J;
}

Eigen::MatrixXd MinimaxProblem::hessian(const SplitPoint& z) const {
  const Eigen::Index n = dim_x(), m = dim_y();
  Eigen::MatrixXd H(n + m, n + m);
  const Eigen::MatrixXd B = hess_xy(z);
  H.topLeftCorner(n, n) = hess_xx(z);
  H.topRightCorner(n, m) = B;
  H.bottomLeftCorner(m, n) = B.transpose();
  H.bottomRightCorner(m, m) = hess_yy(z);
  return H;
}

// ---------------------------------------------------------------------------
// RotationalQuadratic

RotationalQuadratic::RotationalQuadratic(double rho, double a, Eigen::Index n)
    : rho_(rho), a_(a), n_(n) {
  if (!(rho >= 0.0) || !std::isfinite(rho))
    throw ParameterError("RotationalQuadratic: rho must be finite and >= 0");
  if (!std::isfinite(a)) throw ParameterError("RotationalQuadratic: a must be finite");
  if (n < 1) throw ParameterError("RotationalQuadratic: n must be >= 1");
}

double RotationalQuadratic::value(const SplitPoint& z) const {
  check_dims(z);
  return -0.5 * rho_ * z.x.squaredNorm() + a_ * z.x.dot(z.y) +
         0.5 * rho_ * z.y.squaredNorm();
}

Eigen::VectorXd RotationalQuadratic::grad_x(const SplitPoint& z) const {
  check_dims(z);
  return -rho_ * z.x + a_ * z.y;
}

Eigen::VectorXd RotationalQuadratic::grad_y(const SplitPoint& z) const {
  check_dims(z);
  return a_ * z.x + rho_ * z.y;
}

Eigen::MatrixXd RotationalQuadratic::hess_xx(const SplitPoint&) const {
  return -rho_ * Eigen::MatrixXd::Identity(n_, n_);
}
Eigen::MatrixXd RotationalQuadratic::hess_yy(const SplitPoint&) const {
  return rho_ * Eigen::MatrixXd::Identity(n_, n_);
}
Eigen::MatrixXd RotationalQuadratic::hess_xy(const SplitPoint&) const {
  return a_ * Eigen::MatrixXd::Identity(n_, n_);
}

double RotationalQuadratic::beta() const {
  // [-rho I, a I; a I, rho I] squares to (rho^2 + a^2) I.
  return std::hypot(rho_, a_);
}

// ---------------------------------------------------------------------------
// Polynomial

Polynomial::Polynomial() : c_{0.0} {}

Polynomial::Polynomial(std::vector<double> coeffs) : c_(std::move(coeffs)) {
  while (c_.size() > 1 && c_.back() == 0.0) c_.pop_back();
  if (c_.empty()) c_.push_back(0.0);
  for (double v : c_)
    if (!std::isfinite(v)) throw ParameterError("Polynomial: non-finite coefficient");
  if (c_.size() > 1) {
    std::vector<double> d(c_.size() - 1);
    for (size_t k = 1; k < c_.size(); ++k) d[k - 1] = static_cast<double>(k) * c_[k];
    d1_ = std::make_shared<Polynomial>(std::move(d));
  }
}

const Polynomial& Polynomial::deriv() const {
  if (d1_) return *d1_;
  static const Polynomial kZero;
  return kZero;
}

double Polynomial::operator()(double t) const {
  double v = 0.0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) v = v * t + *it;
  return v;
}

bool Polynomial::zero() const { return c_.size() == 1 && c_[0] == 0.0; }

double Polynomial::max_abs_on(double lo, double hi) const {
  double best = std::max(std::abs((*this)(lo)), std::abs((*this)(hi)));
  // Interior extrema: sample densely; exact roots are overkill for the
  // low-degree certificates used here, and the endpoints dominate for the
  // quartic family anyway.
  const int kSamples = 4096;
  for (int i = 1; i < kSamples; ++i) {
    const double t = lo + (hi - lo) * i / kSamples;
    best = std::max(best, std::abs((*this)(t)));
  }
  return best;
}

// ---------------------------------------------------------------------------
// CoupledSeparable

CoupledSeparable::CoupledSeparable(Polynomial f, Polynomial g, Eigen::MatrixXd A,
                                   Constants c)
    : f_(std::move(f)), g_(std::move(g)), A_(std::move(A)), constants_(c) {
  if (A_.rows() < 1 || A_.cols() < 1)
    throw ParameterError("CoupledSeparable: empty interaction matrix");
  if (!A_.allFinite()) throw ParameterError("CoupledSeparable: non-finite A");
  if (!(constants_.box.hi > constants_.box.lo))
    throw ParameterError("CoupledSeparable: invalid certificate box");
}

double CoupledSeparable::value(const SplitPoint& z) const {
  check_dims(z);
  double v = z.x.dot(A_ * z.y);
  for (Eigen::Index i = 0; i < z.x.size(); ++i) v += f_(z.x(i));
  for (Eigen::Index j = 0; j < z.y.size(); ++j) v -= g_(z.y(j));
  return v;
}

Eigen::VectorXd CoupledSeparable::grad_x(const SplitPoint& z) const {
  check_dims(z);
  Eigen::VectorXd g = A_ * z.y;
  const Polynomial& fp = f_.deriv();
  for (Eigen::Index i = 0; i < z.x.size(); ++i) g(i) += fp(z.x(i));
  return g;
}

Eigen::VectorXd CoupledSeparable::grad_y(const SplitPoint& z) const {
  check_dims(z);
  Eigen::VectorXd g = A_.transpose() * z.x;
  const Polynomial& gp = g_.deriv();
  for (Eigen::Index j = 0; j < z.y.size(); ++j) g(j) -= gp(z.y(j));
  return g;
}

Eigen::MatrixXd CoupledSeparable::hess_xx(const SplitPoint& z) const {
  check_dims(z);
  const Polynomial& fpp = f_.deriv().deriv();
  Eigen::VectorXd d(z.x.size());
  for (Eigen::Index i = 0; i < z.x.size(); ++i) d(i) = fpp(z.x(i));
  return d.asDiagonal();
}

Eigen::MatrixXd CoupledSeparable::hess_yy(const SplitPoint& z) const {
  check_dims(z);
  const Polynomial& gpp = g_.deriv().deriv();
  Eigen::VectorXd d(z.y.size());
  for (Eigen::Index j = 0; j < z.y.size(); ++j) d(j) = -gpp(z.y(j));
  return d.asDiagonal();
}

Eigen::MatrixXd CoupledSeparable::hess_xy(const SplitPoint&) const { return A_; }

std::shared_ptr<CoupledSeparable> make_figure1_problem(double a) {
  if (!std::isfinite(a)) throw ParameterError("make_figure1_problem: a must be finite");
  // f(t) = (t+3)(t+1)(t-1)(t-3) = t^4 - 10 t^2 + 9
  Polynomial quartic({9.0, 0.0, -10.0, 0.0, 1.0});
  Eigen::MatrixXd A(1, 1);
  A << a;
  CoupledSeparable::Constants c;
  c.box = Box{-4.0, 4.0};
  c.rho = 20.0;               // f'' = 12 t^2 - 20 >= -20 (globally, in fact)
  c.beta = 172.0 + std::abs(a);  // |f''| <= 172 on the box, plus the cross block
  c.hess_lipschitz = 96.0;    // |f'''| = |24 t| <= 96 on the box
  c.interaction_bound = std::abs(a);
  c.interaction_lipschitz = 0.0;  // diagonal blocks depend on their own variable only
  return std::make_shared<CoupledSeparable>(quartic, quartic, A, c);
}

// ---------------------------------------------------------------------------
// FiniteDiffProblem

FdPolicy::FdPolicy()
    : grad_scale(std::cbrt(std::numeric_limits<double>::epsilon())),
      hess_scale(std::pow(std::numeric_limits<double>::epsilon(), 0.25)) {}

FiniteDiffProblem::FiniteDiffProblem(ValueFn fn, Eigen::Index n, Eigen::Index m,
                                     FdPolicy policy, double rho, double beta)
    : fn_(std::move(fn)), n_(n), m_(m), policy_(policy), rho_(rho), beta_(beta) {
  if (n < 1 || m < 1) throw ParameterError("FiniteDiffProblem: dimensions must be >= 1");
  if (!fn_) throw ParameterError("FiniteDiffProblem: null value function");
}

double FiniteDiffProblem::eval(const SplitPoint& z) const {
  const double v = fn_(z);
  if (!std::isfinite(v))
    throw EvaluationError("finite-difference stencil hit a non-finite value");
  return v;
}

double FiniteDiffProblem::value(const SplitPoint& z) const {
  check_dims(z);
  return eval(z);
}

namespace {

double fd_step(double coord, double scale) {
  return std::max(1.0, std::abs(coord)) * scale;
}

// Central difference of fn along stacked coordinate i.
double central_diff(const std::function<double(const Eigen::VectorXd&)>& fn,
                    const Eigen::VectorXd& v, Eigen::Index i, double scale) {
  const double h = fd_step(v(i), scale);
  Eigen::VectorXd p = v, q = v;
  p(i) += h;
  q(i) -= h;
  return (fn(p) - fn(q)) / (2.0 * h);
}

}  // namespace

Eigen::VectorXd FiniteDiffProblem::grad_x(const SplitPoint& z) const {
  check_dims(z);
  auto fn = [&](const Eigen::VectorXd& v) {
    return eval(SplitPoint::from_stacked(v, n_));
  };
  const Eigen::VectorXd v = z.stacked();
  Eigen::VectorXd g(n_);
  for (Eigen::Index i = 0; i < n_; ++i)
    g(i) = central_diff(fn, v, i, policy_.grad_scale);
  return g;
}

Eigen::VectorXd FiniteDiffProblem::grad_y(const SplitPoint& z) const {
  check_dims(z);
  auto fn = [&](const Eigen::VectorXd& v) {
    return eval(SplitPoint::from_stacked(v, n_));
  };
  const Eigen::VectorXd v = z.stacked();
  Eigen::VectorXd g(m_);
  for (Eigen::Index j = 0; j < m_; ++j)
    g(j) = central_diff(fn, v, n_ + j, policy_.grad_scale);
  return g;
}

namespace {

// Second-difference block d^2 fn / (dv_i dv_j) over index ranges [r0, r0+nr)
// x [c0, c0+nc) of the stacked coordinates.
Eigen::MatrixXd fd_hessian_block(
    const std::function<double(const Eigen::VectorXd&)>& fn,
    const Eigen::VectorXd& v, Eigen::Index r0, Eigen::Index nr, Eigen::Index c0,
    Eigen::Index nc, double scale) {
  Eigen::MatrixXd H(nr, nc);
  const double f0 = fn(v);
  for (Eigen::Index i = 0; i < nr; ++i) {
    for (Eigen::Index j = 0; j < nc; ++j) {
      const Eigen::Index a = r0 + i, b = c0 + j;
      const double ha = fd_step(v(a), scale), hb = fd_step(v(b), scale);
      if (a == b) {
        Eigen::VectorXd p = v, q = v;
        p(a) += ha;
        q(a) -= ha;
        H(i, j) = (fn(p) - 2.0 * f0 + fn(q)) / (ha * ha);
      } else {
        Eigen::VectorXd pp = v, pm = v, mp = v, mm = v;
        pp(a) += ha; pp(b) += hb;
        pm(a) += ha; pm(b) -= hb;
        mp(a) -= ha; mp(b) += hb;
        mm(a) -= ha; mm(b) -= hb;
        H(i, j) = (fn(pp) - fn(pm) - fn(mp) + fn(mm)) / (4.0 * ha * hb);
      }
    }
  }
  return H;
}

}  // namespace

Eigen::MatrixXd FiniteDiffProblem::hess_xx(const SplitPoint& z) const {
  check_dims(z);
  auto fn = [&](const Eigen::VectorXd& v) {
    return eval(SplitPoint::from_stacked(v, n_));
  };
  Eigen::MatrixXd H =
      fd_hessian_block(fn, z.stacked(), 0, n_, 0, n_, policy_.hess_scale);
  return 0.5 * (H + H.transpose().eval());
}

Eigen::MatrixXd FiniteDiffProblem::hess_yy(const SplitPoint& z) const {
  check_dims(z);
  auto fn = [&](const Eigen::VectorXd& v) {
    return eval(SplitPoint::from_stacked(v, n_));
  };
  Eigen::MatrixXd H =
      fd_hessian_block(fn, z.stacked(), n_, m_, n_, m_, policy_.hess_scale);
  return 0.5 * (H + H.transpose().eval());
}

Eigen::MatrixXd FiniteDiffProblem::hess_xy(const SplitPoint& z) const {
  check_dims(z);
  auto fn = [&](const Eigen::VectorXd& v) {
    return eval(SplitPoint::from_stacked(v, n_));
  };
  return fd_hessian_block(fn, z.stacked(), 0, n_, n_, m_, policy_.hess_scale);
}

std::shared_ptr<FiniteDiffProblem> finite_diff_wrap(
    std::shared_ptr<const MinimaxProblem> p, FdPolicy policy) {
  auto fn = [p](const SplitPoint& z) { return p->value(z); };
  return std::make_shared<FiniteDiffProblem>(fn, p->dim_x(), p->dim_y(), policy,
                                             p->rho(), p->beta());
}

// ---------------------------------------------------------------------------
// Factory

std::shared_ptr<MinimaxProblem> make_problem(
    const std::string& name, const std::map<std::string, double>& params) {
  auto get = [&](const std::string& key, std::optional<double> fallback =
                                             std::nullopt) -> double {
    auto it = params.find(key);
    if (it != params.end()) return it->second;
    if (fallback) return *fallback;
    throw ParameterError("problem '" + name + "' requires parameter '" + key + "'");
  };
  auto reject_unknown = [&](std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : params) {
      (void)value;
      bool ok = false;
      for (const char* a : allowed) ok = ok || key == a;
      if (!ok)
        throw ParameterError("problem '" + name + "' has no parameter '" + key + "'");
    }
  };
  if (name == "figure1") {
    reject_unknown({"a"});
    return make_figure1_problem(get("a"));
  }
  if (name == "quadratic" || name == "rotational_quadratic") {
    reject_unknown({"rho", "a", "n"});
    const auto n = static_cast<Eigen::Index>(get("n", 1.0));
    return std::make_shared<RotationalQuadratic>(get("rho"), get("a"), n);
  }
  throw ParameterError("unknown problem '" + name +
                       "' (expected figure1 or quadratic)");
}

}  // namespace saddle
