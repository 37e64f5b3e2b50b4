#include <doctest.h>

#include <random>

#include "censreg/errors.hpp"
#include "censreg/two_step.hpp"
#include "oracles.hpp"

using namespace censreg;

namespace {

PenalizedFit fit_with_alpha(Eigen::VectorXd alpha_w) {
  PenalizedFit f;
  f.alpha_w = std::move(alpha_w);
  return f;
}

}  // namespace

TEST_CASE("detect_outliers uses a strict threshold") {
  CHECK(detect_outliers(fit_with_alpha(Eigen::VectorXd::Zero(5))).empty());
  CHECK(detect_outliers(fit_with_alpha(Eigen::Vector3d(0.2, -0.5, 0.31)), 0.3) ==
        std::vector<std::size_t>{1, 2});
  CHECK(detect_outliers(fit_with_alpha(Eigen::Vector3d(0.3, -0.3, 0.0)), 0.3).empty());
  CHECK(detect_outliers(fit_with_alpha(Eigen::Vector3d(0.0, 1e-300, -2.0)), 0.0) ==
        std::vector<std::size_t>{1, 2});
  CHECK(kDefaultTau0 == 0.3);
  CHECK_THROWS_AS(detect_outliers(fit_with_alpha(Eigen::Vector3d::Zero()), -1.0),
                  ValidationError);
}

TEST_CASE("no detections reproduces the stute estimator exactly") {
  std::mt19937_64 rng(1);
  const auto s = sort_sample(oracle::random_sample(rng, 30, 2, 0.3));
  const auto kw = km_weights(s);
  PenalizedConfig cfg;
  cfg.lambda_override = 1e16;
  const auto ts = fit_two_step(s, kw, fit_penalized(s, kw, cfg));
  CHECK(ts.outliers.empty());
  CHECK(ts.beta_tilde == stute_fit(s, kw).beta);
  CHECK(ts.alpha_tilde_w.isZero(0.0));
}

TEST_CASE("planted gross outlier: two-step equals manual exclusion") {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> norm;
  const int n = 30;
  Eigen::MatrixXd x(n, 2);
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) {
    x(i, 0) = 1.0;
    x(i, 1) = norm(rng);
    y[i] = 1.0 + 2.0 * x(i, 1) + 0.1 * norm(rng);
  }
  const int planted = 7;
  y[planted] += 50.0;
  const SurvivalSample sample(y, std::vector<int>(n, 1), x);
  const auto s = sort_sample(sample);
  const auto kw = km_weights(s);
  PenalizedConfig cfg;
  cfg.lambda_override = 0.05;
  cfg.max_iter = 500;
  const auto pen = fit_penalized(s, kw, cfg);
  const auto ts = fit_two_step(s, kw, pen, 0.3);
  REQUIRE(ts.outliers.size() == 1);
  CHECK(s.perm()[ts.outliers[0]] == static_cast<std::size_t>(planted));

  // Remove the row and refit by hand: uniform 1/n weights on the kept rows
  // are a rescaling that leaves the least squares solution unchanged.
  Eigen::MatrixXd xk(n - 1, 2);
  Eigen::VectorXd yk(n - 1);
  for (int i = 0, r = 0; i < n; ++i) {
    if (i == planted) continue;
    xk.row(r) = x.row(i);
    yk[r++] = y[i];
  }
  const auto ols = oracle::weighted_ols(xk, yk, std::vector<double>(n - 1, 1.0));
  CHECK(std::abs(ts.beta_tilde[0] - ols[0]) < 1e-10);
  CHECK(std::abs(ts.beta_tilde[1] - ols[1]) < 1e-10);
}

TEST_CASE("property: refit residuals on the detected set, zero elsewhere") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const auto s = sort_sample(oracle::random_sample(rng, 20 + rng() % 30, 1 + rng() % 3, 0.3));
    const auto kw = km_weights(s);
    PenalizedConfig cfg;
    cfg.lambda_override = 0.02 + 0.2 * (rng() % 100) / 100.0;
    const auto pen = fit_penalized(s, kw, cfg);
    const double tau0 = 0.05 * (rng() % 5);
    TwoStepFit ts;
    try {
      ts = fit_two_step(s, kw, pen, tau0);
    } catch (const SingularGramError&) {
      continue;
    }
    const auto d = build_weighted_design(s, kw);
    std::vector<bool> in(s.n(), false);
    for (const auto i : ts.outliers) in[i] = true;
    for (std::size_t i = 0; i < s.n(); ++i) {
      const auto ii = static_cast<Eigen::Index>(i);
      if (in[i]) {
        REQUIRE(std::abs(ts.alpha_tilde_w[ii] - (d.yw[ii] - d.xw.row(ii).dot(ts.beta_tilde))) <
                1e-10);
      } else {
        REQUIRE(ts.alpha_tilde_w[ii] == 0.0);
      }
    }
    // Block least squares over (b, a supported on J).
    const Eigen::VectorXd joint = oracle::masked_block_solve(d.xw, d.yw, ts.outliers);
    REQUIRE((joint - ts.beta_tilde).cwiseAbs().maxCoeff() < 1e-9);

    // Monotone screening in tau0.
    const auto looser = detect_outliers(pen, tau0 / 2.0);
    REQUIRE(std::includes(looser.begin(), looser.end(), ts.outliers.begin(), ts.outliers.end()));
  }
}

TEST_CASE("removing too many rows reports |J| and n") {
  Eigen::MatrixXd x(4, 2);
  x << 1, 0, 1, 1, 1, 2, 1, 3;
  const auto s = sort_sample(SurvivalSample(Eigen::Vector4d(1, 5, -3, 9), {1, 1, 1, 1}, x));
  const auto kw = km_weights(s);
  PenalizedFit pen;
  pen.alpha_w = Eigen::Vector4d(1.0, 1.0, 1.0, 0.0);
  try {
    fit_two_step(s, kw, pen, 0.3);
    FAIL("expected SingularGramError");
  } catch (const SingularGramError& e) {
    CHECK(std::string(e.what()).find("3 of 4") != std::string::npos);
  }
}
