#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "censreg/penalized.hpp"

namespace censreg {

inline constexpr double kDefaultTau0 = 0.3;

struct TwoStepFit {
  Eigen::VectorXd beta_tilde;
  std::vector<std::size_t> outliers;  // sorted indices (0-based), ascending
  Eigen::VectorXd alpha_tilde_w;      // refit residual on outliers, 0 elsewhere
  Eigen::VectorXd alpha_tilde;        // alpha_tilde_w / sqrt(w), 0 where w = 0
  double tau0 = kDefaultTau0;
};

/// {i : |alpha_w(i)| > tau0}, 0-based sorted indices.
std::vector<std::size_t> detect_outliers(const PenalizedFit& fit, double tau0 = kDefaultTau0);

/// Weighted least squares on the rows not flagged by detect_outliers.
/// Throws SingularGramError (message carries |J| and n) when the kept rows
/// do not determine beta.
TwoStepFit fit_two_step(const SortedSample& s, const KMWeightSet& kw, const PenalizedFit& fit,
                        double tau0 = kDefaultTau0);

}  // namespace censreg
