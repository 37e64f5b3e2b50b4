#include <doctest.h>

#include <random>

#include "censreg/km_weights.hpp"
#include "oracles.hpp"

using namespace censreg;

namespace {

SortedSample sorted_with_delta(const std::vector<int>& d) {
  const auto n = static_cast<Eigen::Index>(d.size());
  Eigen::VectorXd y = Eigen::VectorXd::LinSpaced(n, 1.0, static_cast<double>(n));
  return sort_sample(SurvivalSample(y, d, Eigen::MatrixXd::Ones(n, 1)));
}

std::vector<int> pattern(unsigned bits, std::size_t n) {
  std::vector<int> d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = (bits >> i) & 1u;
  return d;
}

}  // namespace

TEST_CASE("uncensored weights are 1/n") {
  const auto kw = km_weights(sorted_with_delta({1, 1, 1}));
  for (int i = 0; i < 3; ++i) CHECK(kw.w[i] == doctest::Approx(1.0 / 3).epsilon(1e-14));
  CHECK(kw.pi_uc_hat == 1.0);
}

TEST_CASE("weights for delta = (1,0,1,1)") {
  const auto kw = km_weights(sorted_with_delta({1, 0, 1, 1}));
  CHECK(kw.w[0] == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(kw.w[1] == 0.0);
  CHECK(kw.w[2] == doctest::Approx(0.375).epsilon(1e-15));
  CHECK(kw.w[3] == doctest::Approx(0.375).epsilon(1e-15));
  CHECK(kw.w.sum() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(kw.pi_uc_hat == 0.75);
  CHECK(kw.max_w == doctest::Approx(0.375));
  CHECK(kw.sqrt_w[2] == doctest::Approx(std::sqrt(0.375)));
  const auto brute = oracle::km_product_formula({1, 0, 1, 1});
  for (int i = 0; i < 4; ++i) CHECK(kw.w[i] == doctest::Approx(brute[std::size_t(i)]).epsilon(1e-15));
}

TEST_CASE("lambda_rule") {
  CHECK(kDefaultLambda0 == 1e-4);
  CHECK(lambda_rule(1, 0.3, 0.7) == 1.0);
  CHECK(lambda_rule(1, 1.0) == 1.0);
  // 1000^(1e-4 - 0.4375), evaluated with 30-digit arithmetic.
  CHECK(lambda_rule(1000, 0.875, 1e-4) == doctest::Approx(0.0487304026625234745).epsilon(1e-14));
}

TEST_CASE("exhaustive delta patterns, n <= 8") {
  for (std::size_t n = 1; n <= 8; ++n) {
    if (n < 2) continue;  // SurvivalSample needs n > p = 1
    for (unsigned bits = 0; bits < (1u << n); ++bits) {
      const auto d = pattern(bits, n);
      const auto kw = km_weights(sorted_with_delta(d));
      const auto brute = oracle::km_product_formula(d);
      std::vector<double> y(n);
      for (std::size_t i = 0; i < n; ++i) y[i] = static_cast<double>(i + 1);
      const auto jumps = oracle::km_jumps(y, d);
      double sum = 0;
      for (std::size_t i = 0; i < n; ++i) {
        const auto ii = static_cast<Eigen::Index>(i);
        REQUIRE(kw.w[ii] >= 0.0);
        REQUIRE((kw.w[ii] == 0.0) == (d[i] == 0));
        REQUIRE(std::abs(kw.w[ii] - brute[i]) <= 1e-12);
        REQUIRE(std::abs(kw.w[ii] - jumps[i]) <= 1e-12);
        sum += kw.w[ii];
      }
      REQUIRE(sum <= 1.0 + 1e-12);
      if (d[n - 1] == 1) {
        REQUIRE(std::abs(sum - 1.0) <= 1e-12);
      } else {
        REQUIRE(sum < 1.0 - 1e-12);
      }

      // Flipping an event to censored zeroes it and raises later weights.
      for (std::size_t j = 0; j < n; ++j) {
        if (!d[j]) continue;
        auto flipped = d;
        flipped[j] = 0;
        const auto kf = km_weights(sorted_with_delta(flipped));
        REQUIRE(kf.w[static_cast<Eigen::Index>(j)] == 0.0);
        for (std::size_t i = j + 1; i < n; ++i) {
          const auto ii = static_cast<Eigen::Index>(i);
          REQUIRE(kf.w[ii] >= kw.w[ii] - 1e-15);
        }
      }
    }
  }
}

TEST_CASE("weights equal textbook Kaplan-Meier jumps on random samples") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + rng() % 199;
    const auto s = oracle::random_sample(rng, n, 1, 0.5, trial % 3 == 0);
    const auto sorted = sort_sample(s);
    const auto kw = km_weights(sorted);
    const auto jumps = oracle::km_jumps(oracle::to_std(sorted.base().y()), sorted.base().delta());
    for (std::size_t i = 0; i < n; ++i) {
      REQUIRE(std::abs(kw.w[static_cast<Eigen::Index>(i)] - jumps[i]) <= 1e-12);
    }
  }
}
