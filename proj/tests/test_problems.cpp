#include <doctest.h>

#include <cmath>

#include "saddle/errors.hpp"
#include "saddle/numerics.hpp"
#include "saddle/problems.hpp"
#include "test_support.hpp"

using namespace saddle;

TEST_SUITE_BEGIN("problems");

namespace {

// Direct factored evaluation, independent of the coefficient representation.
double quartic_oracle(double t) {
  return (t + 3.0) * (t + 1.0) * (t - 1.0) * (t - 3.0);
}

}  // namespace

TEST_CASE("figure1 problem values and certified constants") {
  auto p = make_figure1_problem(1.0);
  SplitPoint origin = SplitPoint::scalar(0.0, 0.0);
  CHECK(p->value(origin) == doctest::Approx(0.0));
  CHECK(p->grad_x(origin)(0) == doctest::Approx(0.0));
  CHECK(p->grad_y(origin)(0) == doctest::Approx(0.0));
  CHECK(p->rho() == doctest::Approx(20.0));
  CHECK(p->beta() == doctest::Approx(173.0));
  CHECK(p->domain().has_value());
  CHECK(p->domain()->lo == doctest::Approx(-4.0));
  CHECK(p->domain()->hi == doctest::Approx(4.0));

  auto p10 = make_figure1_problem(10.0);
  const double expected =
      quartic_oracle(2.0) + 2.0 * 10.0 * 1.0 - quartic_oracle(1.0);
  CHECK(expected == doctest::Approx(5.0));  // -15 + 20 - 0
  CHECK(p10->value(SplitPoint::scalar(2.0, 1.0)) == doctest::Approx(expected));
  CHECK(p10->beta() == doctest::Approx(182.0));
}

TEST_CASE("figure1 polynomial matches the factored form everywhere") {
  auto p = make_figure1_problem(0.0);
  for (double t = -4.0; t <= 4.0; t += 0.37) {
    CHECK(p->value(SplitPoint::scalar(t, 0.0)) ==
          doctest::Approx(quartic_oracle(t) - quartic_oracle(0.0)));
  }
}

TEST_CASE("figure1 with a=0 separates: blockwise roots are stationary") {
  auto p = make_figure1_problem(0.0);
  const double r = std::sqrt(5.0);  // f'(t) = 4t^3 - 20t = 0 at 0, +-sqrt(5)
  for (double xs : {-r, 0.0, r}) {
    for (double ys : {-r, 0.0, r}) {
      CHECK(p->grad_norm(SplitPoint::scalar(xs, ys)) <= 1e-12);
    }
  }
}

TEST_CASE("rotational quadratic: exact value, Hessians, constants") {
  RotationalQuadratic p(1.0, 2.0);
  auto rng = test::make_rng(21);
  for (int k = 0; k < 20; ++k) {
    SplitPoint z = test::random_point(rng, p, 3.0);
    const double expected = -0.5 * z.x.squaredNorm() + 2.0 * z.x.dot(z.y) +
                            0.5 * z.y.squaredNorm();
    CHECK(p.value(z) == doctest::Approx(expected).epsilon(1e-14));
    CHECK((p.hess_xx(z) + Eigen::MatrixXd::Identity(1, 1)).norm() == 0.0);
    CHECK((p.hess_yy(z) - Eigen::MatrixXd::Identity(1, 1)).norm() == 0.0);
    CHECK((p.hess_xy(z) - 2.0 * Eigen::MatrixXd::Identity(1, 1)).norm() == 0.0);
  }
  CHECK(p.beta() == doctest::Approx(std::sqrt(5.0)));
  CHECK(p.alpha(3.0) == doctest::Approx(1.0));
  CHECK(p.grad_norm(SplitPoint::scalar(0.0, 0.0)) == 0.0);
  CHECK_THROWS_AS(RotationalQuadratic(-1.0, 2.0), ParameterError);
}

TEST_CASE("finite differences of x^T y recover the bilinear gradient") {
  FiniteDiffProblem p([](const SplitPoint& z) { return z.x.dot(z.y); }, 1, 1);
  SplitPoint z = SplitPoint::scalar(2.0, 3.0);
  CHECK(std::abs(p.grad_x(z)(0) - 3.0) <= 1e-6);
  CHECK(std::abs(p.grad_y(z)(0) - 2.0) <= 1e-6);
}

TEST_CASE("finite differences of a constant vanish") {
  FiniteDiffProblem p([](const SplitPoint&) { return 4.25; }, 2, 2);
  auto rng = test::make_rng(22);
  SplitPoint z = test::random_point(rng, p, 3.0);
  CHECK(p.grad_x(z).norm() <= 1e-8);
  CHECK(p.grad_y(z).norm() <= 1e-8);
}

TEST_CASE("finite-difference wrap agrees with analytic derivatives") {
  auto quad = std::make_shared<RotationalQuadratic>(1.0, 2.0, 2);
  auto fd = finite_diff_wrap(quad);
  auto rng = test::make_rng(23);
  for (int k = 0; k < 10; ++k) {
    SplitPoint z = test::random_point(rng, *quad, 2.0);
    CHECK((fd->hess_xx(z) - quad->hess_xx(z)).cwiseAbs().maxCoeff() <= 1e-4);
    CHECK((fd->hess_yy(z) - quad->hess_yy(z)).cwiseAbs().maxCoeff() <= 1e-4);
    CHECK((fd->hess_xy(z) - quad->hess_xy(z)).cwiseAbs().maxCoeff() <= 1e-4);
  }
}

TEST_CASE("non-finite value inside a stencil raises an evaluation error") {
  FiniteDiffProblem p(
      [](const SplitPoint& z) { return std::log(z.x(0)); }, 1, 1);
  CHECK_THROWS_AS(p.grad_x(SplitPoint::scalar(1e-9, 0.0)), EvaluationError);
}

TEST_CASE("analytic derivatives match central differences at random points") {
  std::vector<std::shared_ptr<MinimaxProblem>> probs = {
      make_figure1_problem(1.0), make_figure1_problem(10.0),
      std::make_shared<RotationalQuadratic>(1.0, 2.0),
      std::make_shared<RotationalQuadratic>(3.0, 0.5, 2)};
  auto rng = test::make_rng(24);
  for (const auto& p : probs) {
    auto fd = finite_diff_wrap(p);
    for (int k = 0; k < 100; ++k) {
      SplitPoint z = test::random_point(rng, *p, 3.0);
      Eigen::VectorXd ga = p->grad(z), gf = fd->grad(z);
      CHECK((ga - gf).norm() <= 1e-6 * std::max(1.0, ga.norm()));
    }
    for (int k = 0; k < 15; ++k) {
      SplitPoint z = test::random_point(rng, *p, 3.0);
      CHECK((p->hess_xx(z) - fd->hess_xx(z)).cwiseAbs().maxCoeff() <=
            1e-4 * std::max(1.0, p->hess_xx(z).norm()));
      CHECK((p->hess_yy(z) - fd->hess_yy(z)).cwiseAbs().maxCoeff() <=
            1e-4 * std::max(1.0, p->hess_yy(z).norm()));
      CHECK((p->hess_xy(z) - fd->hess_xy(z)).cwiseAbs().maxCoeff() <=
            1e-4 * std::max(1.0, p->hess_xy(z).norm()));
    }
    // The Hessian also matches central differences of the analytic gradient.
    for (int k = 0; k < 15; ++k) {
      SplitPoint z = test::random_point(rng, *p, 3.0);
      const Eigen::VectorXd v = z.stacked();
      const Eigen::Index d = v.size();
      Eigen::MatrixXd fdh(d, d);
      const double scale = std::pow(std::numeric_limits<double>::epsilon(), 0.25);
      for (Eigen::Index i = 0; i < d; ++i) {
        const double h = std::max(1.0, std::abs(v(i))) * scale;
        Eigen::VectorXd a = v, b = v;
        a(i) += h;
        b(i) -= h;
        fdh.col(i) = (p->grad(SplitPoint::from_stacked(a, p->dim_x())) -
                      p->grad(SplitPoint::from_stacked(b, p->dim_x()))) /
                     (2.0 * h);
      }
      CHECK((p->hessian(z) - fdh).cwiseAbs().maxCoeff() <=
            1e-4 * std::max(1.0, p->hessian(z).norm()));
    }
  }
}

TEST_CASE("hessian blocks are symmetric and within the weak-curvature band") {
  std::vector<std::shared_ptr<MinimaxProblem>> probs = {
      make_figure1_problem(5.0), std::make_shared<RotationalQuadratic>(2.0, 1.0, 3)};
  auto rng = test::make_rng(25);
  for (const auto& p : probs) {
    const Box box = p->domain().value_or(Box{-3.0, 3.0});
    for (int k = 0; k < 50; ++k) {
      std::uniform_real_distribution<double> u(box.lo, box.hi);
      Eigen::VectorXd x(p->dim_x()), y(p->dim_y());
      for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = u(rng);
      for (Eigen::Index j = 0; j < y.size(); ++j) y(j) = u(rng);
      SplitPoint z{x, y};
      Eigen::MatrixXd A = p->hess_xx(z), C = p->hess_yy(z);
      CHECK((A - A.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
      CHECK((C - C.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
      CHECK(sym_eig_min(A) >= -p->rho() - 1e-9);
      CHECK(sym_eig_min((-C).eval()) >= -p->rho() - 1e-9);
      CHECK(spectral_norm(p->hessian(z)) <= p->beta() + 1e-9);
    }
  }
}

TEST_CASE("problem factory resolves names and reports unknown parameters") {
  auto q = make_problem("quadratic", {{"rho", 1.0}, {"a", 2.0}});
  CHECK(q->rho() == doctest::Approx(1.0));
  auto f = make_problem("figure1", {{"a", 10.0}});
  CHECK(f->beta() == doctest::Approx(182.0));
  CHECK_THROWS_AS(make_problem("figure1", {}), ParameterError);
  CHECK_THROWS_AS(make_problem("nope", {{"a", 1.0}}), ParameterError);
  CHECK_THROWS_AS(make_problem("figure1", {{"a", 1.0}, {"rho", 2.0}}),
                  ParameterError);  // typo'd keys are named, not ignored
}

TEST_SUITE_END();
