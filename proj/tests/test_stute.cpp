#include <doctest.h>

#include <numeric>
#include <random>

#include "censreg/errors.hpp"
#include "censreg/simulation.hpp"
#include "censreg/stute.hpp"
#include "oracles.hpp"

using namespace censreg;

namespace {

SortedSample sample_from(Eigen::VectorXd y, std::vector<int> d, Eigen::MatrixXd x) {
  return sort_sample(SurvivalSample(std::move(y), std::move(d), std::move(x)));
}

}  // namespace

TEST_CASE("weighted design with uniform weights halves the rows for n = 4") {
  Eigen::MatrixXd x(4, 2);
  x << 1, 0.1, 1, 0.4, 1, 0.2, 1, 0.9;
  const auto s = sample_from(Eigen::Vector4d(1, 2, 3, 4), {1, 1, 1, 1}, x);
  const auto d = build_weighted_design(s, km_weights(s));
  CHECK((d.xw - s.base().x() / 2.0).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((d.gram - d.xw.transpose() * d.xw).norm() < 1e-15);
}

TEST_CASE("censored rows of the weighted design are zero") {
  Eigen::MatrixXd x(4, 2);
  x << 1, 0.1, 1, 0.4, 1, 0.2, 1, 0.9;
  const auto s = sample_from(Eigen::Vector4d(1, 2, 3, 4), {1, 0, 1, 1}, x);
  const auto d = build_weighted_design(s, km_weights(s));
  CHECK(d.xw.row(1).isZero(0.0));
  CHECK(d.yw[1] == 0.0);
}

TEST_CASE("gram of an all-ones column with uniform weights is [1]") {
  const auto s = sample_from(Eigen::Vector4d(1, 2, 3, 4), {1, 1, 1, 1}, Eigen::MatrixXd::Ones(4, 1));
  const auto d = build_weighted_design(s, km_weights(s));
  CHECK(d.gram.rows() == 1);
  CHECK(d.gram(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("wls_solve: intercept only gives the mean") {
  Eigen::VectorXd y(5);
  y << 0.3, -1.2, 4.0, 2.5, 0.9;
  const auto s = sample_from(y, {1, 1, 1, 1, 1}, Eigen::MatrixXd::Ones(5, 1));
  const auto fit = stute_fit(s, km_weights(s));
  CHECK(fit.beta[0] == doctest::Approx(y.mean()).epsilon(1e-14));
}

TEST_CASE("wls_solve: exact fit recovers b0") {
  std::mt19937_64 rng(3);
  const auto s = sort_sample(oracle::random_sample(rng, 40, 3, 0.3));
  const auto d = build_weighted_design(s, km_weights(s));
  const Eigen::Vector3d b0(0.7, -1.3, 2.2);
  const auto fit = wls_solve(d, d.xw * b0);
  CHECK((fit.beta - b0).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(fit.gram_condition >= 1.0);
}

TEST_CASE("wls_solve matches normal-equation OLS on uncensored data") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const auto s = oracle::random_sample(rng, 50, 3, 0.0);
    const auto sorted = sort_sample(s);
    const auto fit = stute_fit(sorted, km_weights(sorted));
    const auto ols = oracle::weighted_ols(s.x(), s.y(), std::vector<double>(50, 1.0));
    for (int k = 0; k < 3; ++k) REQUIRE(std::abs(fit.beta[k] - ols[std::size_t(k)]) < 1e-9);
  }
}

TEST_CASE("property: normal equations hold for wls_solve") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    const auto s = sort_sample(oracle::random_sample(rng, 10 + rng() % 80, 1 + rng() % 4, 0.4));
    const auto d = build_weighted_design(s, km_weights(s));
    const auto fit = wls_solve(d, d.yw);
    const double lhs = (d.xw.transpose() * fit.residuals_w).cwiseAbs().maxCoeff();
    REQUIRE(lhs <= 1e-8 * (1.0 + (d.xw.transpose() * d.yw).cwiseAbs().maxCoeff()));
    REQUIRE((d.gram - d.gram.transpose()).norm() == 0.0);
  }
}

TEST_CASE("collinear covariates raise SingularGramError") {
  Eigen::MatrixXd x(5, 2);
  x << 1, 2, 1, 2, 1, 2, 1, 2, 1, 2;
  const auto s = sample_from(Eigen::VectorXd::LinSpaced(5, 0, 1), {1, 1, 1, 1, 1}, x);
  CHECK_THROWS_AS(stute_fit(s, km_weights(s)), SingularGramError);

  // Enough rows, but only one carries weight.
  Eigen::MatrixXd x2(4, 2);
  x2 << 1, 0, 1, 1, 1, 2, 1, 3;
  const auto s2 = sample_from(Eigen::Vector4d(1, 2, 3, 4), {0, 0, 0, 1}, x2);
  try {
    stute_fit(s2, km_weights(s2));
    FAIL("expected SingularGramError");
  } catch (const SingularGramError& e) {
    CHECK(e.min_eigenvalue() <= 1e-12 * e.max_eigenvalue());
  }
}

TEST_CASE("property: stute estimator is permutation invariant and scale equivariant") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    const auto s = oracle::random_sample(rng, 30, 2, 0.4);
    const auto sorted = sort_sample(s);
    const auto base = stute_fit(sorted, km_weights(sorted)).beta;

    std::vector<Eigen::Index> order(30);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    Eigen::VectorXd y(30);
    Eigen::MatrixXd x(30, 2);
    std::vector<int> d(30);
    for (Eigen::Index i = 0; i < 30; ++i) {
      y[i] = s.y()[order[i]];
      x.row(i) = s.x().row(order[i]);
      d[std::size_t(i)] = s.delta()[std::size_t(order[i])];
    }
    const auto shuffled = sort_sample(SurvivalSample(y, d, x));
    REQUIRE((stute_fit(shuffled, km_weights(shuffled)).beta - base).norm() < 1e-12);

    const double c = 0.5 + 3.0 * (rng() % 100) / 100.0;
    const auto scaled = sort_sample(SurvivalSample(s.y() * c, s.delta(), s.x()));
    REQUIRE((stute_fit(scaled, km_weights(scaled)).beta - c * base).norm() <
            1e-10 * (1.0 + base.norm() * c));
  }
}

TEST_CASE("gram approaches E[XX'] on large uncensored samples") {
  DgpConfig cfg;
  cfg.n = 10000;
  cfg.mu = 1e6;  // no censoring
  cfg.outlier_shift = 0.0;
  cfg.seed = 12;
  const auto s = sort_sample(generate_sample(cfg));
  const auto d = build_weighted_design(s, km_weights(s));
  Eigen::Matrix2d expected;
  expected << 1.0, 0.5, 0.5, 1.0 / 3.0;
  const double op = Eigen::JacobiSVD<Eigen::MatrixXd>(d.gram - expected).singularValues()[0];
  CHECK(op < 0.05);
}

TEST_CASE("stute estimator is biased downward by the planted outliers") {
  DgpConfig cfg;
  cfg.n = 1000;
  cfg.mu = 5.0;
  double sum = 0.0;
  const int reps = 200;
  for (int r = 0; r < reps; ++r) {
    cfg.seed = 1000 + static_cast<std::uint64_t>(r);
    const auto s = sort_sample(generate_sample(cfg));
    sum += stute_fit(s, km_weights(s)).beta[1];
  }
  const double bias = sum / reps - 1.0;
  CHECK(bias < -0.1);
}
