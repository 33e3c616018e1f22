#include <doctest.h>

#include <cmath>

#include "saddle/prox.hpp"
#include "test_support.hpp"

using namespace saddle;

TEST_SUITE_BEGIN("prox");

namespace {

std::shared_ptr<CoupledSeparable> quartic_only_problem() {
  // L(x, y) = f(x), constant in y: the saddle machinery must reduce to the
  // plain Moreau envelope of f.
  Polynomial quartic({9.0, 0.0, -10.0, 0.0, 1.0});
  Polynomial zero({0.0});
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(1, 1);
  CoupledSeparable::Constants c;
  c.rho = 20.0;
  c.beta = 172.0;
  c.box = Box{-4.0, 4.0};
  return std::make_shared<CoupledSeparable>(quartic, zero, A, c);
}

double quartic_prime(double t) { return 4.0 * t * t * t - 20.0 * t; }

}  // namespace

TEST_CASE("prox of the rotational quadratic matches the closed form") {
  RotationalQuadratic p(1.0, 2.0);
  ProxResult r = prox(p, SplitPoint::scalar(1.0, 0.0), 3.0, 1e-12);
  CHECK(r.z_plus.x(0) == doctest::Approx(0.75).epsilon(1e-10));
  CHECK(r.z_plus.y(0) == doctest::Approx(0.75).epsilon(1e-10));
  CHECK(r.residual <= 1e-12);
  CHECK(r.eta == 3.0);

  ProxResult r2 = prox(p, SplitPoint::scalar(0.0, 1.0), 3.0, 1e-12);
  CHECK(r2.z_plus.x(0) == doctest::Approx(-0.75).epsilon(1e-10));
  CHECK(r2.z_plus.y(0) == doctest::Approx(0.75).epsilon(1e-10));

  auto rng = test::make_rng(31);
  for (int k = 0; k < 25; ++k) {
    SplitPoint z = test::random_point(rng, p, 3.0);
    SplitPoint oracle = test::quadratic_prox_oracle(1.0, 2.0, 3.0, z);
    ProxResult rr = prox(p, z, 3.0, 1e-12);
    CHECK(distance(rr.z_plus, oracle) <= 1e-10);
  }
}

TEST_CASE("a stationary center is a fixed point of the prox") {
  RotationalQuadratic p(1.0, 2.0);
  ProxResult r = prox(p, SplitPoint::scalar(0.0, 0.0), 3.0);
  CHECK(r.z_plus.norm() <= 1e-12);
  CHECK(r.residual <= 1e-12);

  auto fig = make_figure1_problem(0.0);
  const double root = std::sqrt(5.0);
  ProxResult rf = prox(*fig, SplitPoint::scalar(root, -root), 40.0);
  CHECK(distance(rf.z_plus, SplitPoint::scalar(root, -root)) <= 1e-10);
}

TEST_CASE("objective constant in y: y is fixed, x takes a Moreau prox step") {
  auto p = quartic_only_problem();
  const double eta = 40.0;
  auto rng = test::make_rng(32);
  std::uniform_real_distribution<double> u(-3.5, 3.5);
  for (int k = 0; k < 10; ++k) {
    const double x = u(rng), y = u(rng);
    ProxResult r = prox(*p, SplitPoint::scalar(x, y), eta, 1e-12);
    CHECK(std::abs(r.z_plus.y(0) - y) <= 1e-12);
    const double oracle =
        test::scalar_prox_oracle(quartic_prime, eta, x, -10.0, 10.0);
    CHECK(std::abs(r.z_plus.x(0) - oracle) <= 1e-9);
  }
}

TEST_CASE("prox requires eta > rho and honors the iteration budget") {
  RotationalQuadratic p(1.0, 2.0);
  CHECK_THROWS_AS(prox(p, SplitPoint::scalar(1.0, 0.0), 0.5), ParameterError);
  CHECK_THROWS_AS(prox(p, SplitPoint::scalar(1.0, 0.0), 1.0), ParameterError);

  InnerOptions opts;
  opts.tol = 1e-12;
  opts.max_iter = 2;
  opts.method = InnerMethod::kGda;  // far too few fallback steps to converge
  bool carried_best = false;
  try {
    inner_solve(p, SplitPoint::scalar(3.0, -2.0), 3.0, opts);
  } catch (const ConvergenceError& e) {
    carried_best = e.best.z_plus.all_finite() && e.best.residual > 0.0;
  }
  CHECK(carried_best);
}

TEST_CASE("uniqueness: different inner starts agree within 10 tol/(eta-rho)") {
  auto fig = make_figure1_problem(10.0);
  const double eta = 40.0, tol = 1e-11;
  auto rng = test::make_rng(33);
  for (int k = 0; k < 10; ++k) {
    SplitPoint z = test::random_point(rng, *fig, 3.0);
    InnerOptions a;
    a.tol = tol;
    ProxResult ra = inner_solve(*fig, z, eta, a);
    SplitPoint start = test::random_point(rng, *fig, 3.0);
    InnerOptions b;
    b.tol = tol;
    b.start = &start;
    ProxResult rb = inner_solve(*fig, z, eta, b);
    CHECK(distance(ra.z_plus, rb.z_plus) <= 10.0 * tol / (eta - fig->rho()));
  }
}

TEST_CASE("gda fallback satisfies the contraction certificate") {
  auto fig = make_figure1_problem(10.0);
  const double eta = 40.0;
  const double mu = eta - fig->rho();
  const double beta_hat = fig->beta() + eta;
  const double s = mu / (beta_hat * beta_hat);
  const double bound = std::sqrt(1.0 - 2.0 * mu * s + beta_hat * beta_hat * s * s);

  const SplitPoint center = SplitPoint::scalar(1.0, 2.0);
  ProxResult exact = prox(*fig, center, eta, 1e-14);

  std::vector<SplitPoint> trace;
  InnerOptions opts;
  opts.tol = 1e-10;
  opts.method = InnerMethod::kGda;
  opts.trace = &trace;
  inner_solve(*fig, center, eta, opts);
  REQUIRE(trace.size() >= 10);
  for (size_t k = 0; k + 1 < trace.size(); ++k) {
    const double d0 = distance(trace[k], exact.z_plus);
    const double d1 = distance(trace[k + 1], exact.z_plus);
    if (d0 <= 1e-9) break;  // below this the exact-solution error dominates
    CHECK(d1 / d0 <= bound + 1e-6);
  }
}

TEST_CASE("fixed-point bound |z - prox(z)| <= |grad L(z)|/(eta - rho)") {
  std::vector<std::shared_ptr<MinimaxProblem>> probs = {
      make_figure1_problem(1.0), make_figure1_problem(10.0),
      std::make_shared<RotationalQuadratic>(1.0, 2.0)};
  auto rng = test::make_rng(34);
  for (const auto& p : probs) {
    const double eta = p->constant_hessian() ? 3.0 : 40.0;
    for (int k = 0; k < 30; ++k) {
      SplitPoint z = test::random_point(rng, *p, 3.0);
      ProxResult r = prox(*p, z, eta, 1e-12);
      CHECK(distance(z, r.z_plus) <=
            p->grad_norm(z) / (eta - p->rho()) + 1e-9);
    }
  }
}

TEST_CASE("Moreau gradient identity eta(x - x+) = f'(x+) for the quartic") {
  auto p = quartic_only_problem();
  const double eta = 40.0, tol = 1e-11;
  auto rng = test::make_rng(35);
  std::uniform_real_distribution<double> u(-3.5, 3.5);
  for (int k = 0; k < 20; ++k) {
    const double x = u(rng);
    PartialEnvelopeResult r =
        partial_moreau_x(*p, SplitPoint::scalar(x, 0.0), eta, tol);
    CHECK(std::abs(eta * (x - r.arg(0)) - quartic_prime(r.arg(0))) <= 10.0 * tol);
  }
}

TEST_CASE("partial envelopes of the quadratic match the smoothing closed forms") {
  RotationalQuadratic p(1.0, 2.0);
  const double eta = 3.0;
  // x-smoothing at (1,1): 0.5*(eta^-1 - rho^-1)^-1 + eta a/(eta-rho) - alpha/2
  PartialEnvelopeResult mx = partial_moreau_x(p, SplitPoint::scalar(1.0, 1.0), eta, 1e-12);
  CHECK(mx.value == doctest::Approx(1.75).epsilon(1e-10));
  // y side at (1,1): alpha/2 + eta a/(eta-rho) + 0.5*|sigma|
  PartialEnvelopeResult my = partial_moreau_y(p, SplitPoint::scalar(1.0, 1.0), eta, 1e-12);
  CHECK(my.value == doctest::Approx(4.25).epsilon(1e-10));
  CHECK(mx.residual <= 1e-12);
  CHECK(my.residual <= 1e-12);
}

TEST_CASE("partial envelope of a function constant in y returns it unchanged") {
  auto p = quartic_only_problem();
  SplitPoint z = SplitPoint::scalar(1.3, -0.4);
  PartialEnvelopeResult r = partial_moreau_y(*p, z, 40.0, 1e-12);
  CHECK(r.value == doctest::Approx(p->value(z)).epsilon(1e-12));
  CHECK(std::abs(r.arg(0) - z.y(0)) <= 1e-12);
}

TEST_CASE("partial envelope at a convex block minimizer returns the minimum") {
  // f(t) = t^2 is convex; at its minimizer the envelope value equals f.
  Polynomial square({0.0, 0.0, 1.0});
  Polynomial zero({0.0});
  CoupledSeparable::Constants c;
  c.rho = -2.0;  // strongly convex block
  c.beta = 2.0;
  c.box = Box{-10.0, 10.0};
  CoupledSeparable p(square, zero, Eigen::MatrixXd::Zero(1, 1), c);
  PartialEnvelopeResult r = partial_moreau_x(p, SplitPoint::scalar(0.0, 1.0), 1.0);
  CHECK(std::abs(r.value) <= 1e-12);
  CHECK(std::abs(r.arg(0)) <= 1e-12);
}

TEST_CASE("Moreau sandwich: x-envelope below L, y-envelope above L") {
  std::vector<std::shared_ptr<MinimaxProblem>> probs = {
      make_figure1_problem(10.0), std::make_shared<RotationalQuadratic>(1.0, 2.0)};
  auto rng = test::make_rng(36);
  for (const auto& p : probs) {
    const double eta = p->constant_hessian() ? 3.0 : 40.0;
    for (int k = 0; k < 100; ++k) {
      SplitPoint z = test::random_point(rng, *p, 3.0);
      const double L = p->value(z);
      CHECK(partial_moreau_x(*p, z, eta).value <= L + 1e-9);
      CHECK(partial_moreau_y(*p, z, eta).value >= L - 1e-9);
    }
  }
}

TEST_SUITE_END();
