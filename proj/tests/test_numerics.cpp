#include <doctest.h>

#include "saddle/errors.hpp"
#include "saddle/numerics.hpp"
#include "test_support.hpp"

using namespace saddle;

TEST_SUITE_BEGIN("numerics");

TEST_CASE("solve_linear on identity and diagonal systems") {
  Eigen::MatrixXd I = Eigen::MatrixXd::Identity(2, 2);
  Eigen::VectorXd b(2);
  b << 1, 2;
  CHECK((solve_linear(I, b) - b).norm() == doctest::Approx(0.0));

  Eigen::MatrixXd D(2, 2);
  D << 2, 0, 0, 4;
  Eigen::VectorXd rhs(2);
  rhs << 2, 4;
  Eigen::VectorXd v = solve_linear(D, rhs);
  CHECK(v(0) == doctest::Approx(1.0));
  CHECK(v(1) == doctest::Approx(1.0));
}

TEST_CASE("solve_linear residual bound on random well-conditioned systems") {
  auto rng = test::make_rng(11);
  for (int order = 2; order <= 32; order += 6) {
    for (int rep = 0; rep < 10; ++rep) {
      Eigen::MatrixXd A = test::random_symmetric(rng, order, 1.0);
      Eigen::MatrixXd M =
          A * A.transpose() + Eigen::MatrixXd::Identity(order, order);
      Eigen::VectorXd b = test::random_vector(rng, order, 2.0);
      Eigen::VectorXd v = solve_linear(M, b);
      const double resid = (M * v - b).norm();
      CHECK(resid <= 1e-10 * (spectral_norm(M) * v.norm() + b.norm()));
    }
  }
}

TEST_CASE("solve_linear rejects singular and ill-conditioned matrices") {
  Eigen::MatrixXd S(2, 2);
  S << 1, 1, 1, 1;
  Eigen::VectorXd b(2);
  b << 1, 0;
  CHECK_THROWS_AS(solve_linear(S, b), SingularMatrixError);

  Eigen::MatrixXd Ill(2, 2);
  Ill << 1, 0, 0, 1e-14;
  CHECK_THROWS_AS(solve_linear(Ill, b), SingularMatrixError);
}

TEST_CASE("sym_eig_min on known spectra") {
  Eigen::MatrixXd D = Eigen::Vector3d(3, -2, 5).asDiagonal();
  CHECK(sym_eig_min(D) == doctest::Approx(-2.0).epsilon(1e-12));

  Eigen::MatrixXd P(2, 2);
  P << 0, 1, 1, 0;
  CHECK(sym_eig_min(P) == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("sym_eig_min matches characteristic-polynomial bisection oracle") {
  auto rng = test::make_rng(12);
  for (int rep = 0; rep < 20; ++rep) {
    Eigen::MatrixXd M = test::random_symmetric(rng, 6, 2.0);
    const double oracle = test::eig_min_oracle(M);
    REQUIRE(std::isfinite(oracle));
    CHECK(std::abs(sym_eig_min(M) - oracle) <= 1e-8);
  }
}

TEST_CASE("sym_eig_min shift identity") {
  auto rng = test::make_rng(13);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int rep = 0; rep < 25; ++rep) {
    Eigen::MatrixXd M = test::random_symmetric(rng, 5, 2.0);
    const double c = u(rng);
    Eigen::MatrixXd shifted = M + c * Eigen::MatrixXd::Identity(5, 5);
    const double scale = std::max(1.0, spectral_norm(M));
    CHECK(std::abs(sym_eig_min(shifted) - (sym_eig_min(M) + c)) <= 1e-9 * scale);
  }
}

TEST_CASE("spectral_norm on known matrices") {
  CHECK(spectral_norm(Eigen::MatrixXd::Identity(3, 3)) == doctest::Approx(1.0));
  Eigen::MatrixXd N(2, 2);
  N << 0, 2, 0, 0;
  CHECK(spectral_norm(N) == doctest::Approx(2.0));
}

TEST_CASE("spectral_norm matches sqrt(lambda_max(M^T M)) oracle") {
  auto rng = test::make_rng(14);
  for (int rep = 0; rep < 20; ++rep) {
    Eigen::MatrixXd M(4, 4);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) M(i, j) = u(rng);
    const double oracle =
        std::sqrt(test::eig_max_oracle((M.transpose() * M).eval()));
    CHECK(std::abs(spectral_norm(M) - oracle) <= 1e-8);
  }
}

TEST_CASE("SymMatrix validates symmetry and finiteness") {
  Eigen::MatrixXd A(2, 2);
  A << 1, 2, 2.5, 1;
  CHECK_THROWS_AS(SymMatrix{A}, ConsistencyError);
  Eigen::MatrixXd B(2, 2);
  B << 1, std::numeric_limits<double>::quiet_NaN(),
      std::numeric_limits<double>::quiet_NaN(), 1;
  CHECK_THROWS_AS(SymMatrix{B}, EvaluationError);
  CHECK_THROWS_AS(sym_eig_min(B), EvaluationError);
}

TEST_SUITE_END();
