#pragma once

#include <cstddef>

#include <Eigen/Dense>

#include "censreg/data_model.hpp"

namespace censreg {

/// Kaplan-Meier jump weights at the order statistics of a sorted sample.
struct KMWeightSet {
  Eigen::VectorXd w;       // aligned to sorted order
  Eigen::VectorXd sqrt_w;
  double pi_uc_hat = 0.0;  // fraction uncensored
  double max_w = 0.0;
};

/// w_(1) = delta_(1)/n,
/// w_(i) = delta_(i)/(n-i+1) * prod_{j<i} ((n-j)/(n-j+1))^delta_(j).
KMWeightSet km_weights(const SortedSample& s);

inline constexpr double kDefaultLambda0 = 1e-4;

/// Penalty level n^(lambda0 - pi_uc_hat/2).
double lambda_rule(std::size_t n, double pi_uc_hat, double lambda0 = kDefaultLambda0);

}  // namespace censreg
