#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "censreg/data_model.hpp"
#include "censreg/km_weights.hpp"
#include "censreg/stute.hpp"

namespace censreg {

struct PenalizedConfig {
  double lambda0 = kDefaultLambda0;
  std::size_t max_iter = 10;
  /// 0 runs exactly max_iter cycles; otherwise stop once a cycle lowers the
  /// objective by less than tol.
  double tol = 0.0;
  std::optional<double> lambda_override;
};

struct PenalizedFit {
  Eigen::VectorXd beta;
  Eigen::VectorXd alpha_w;  // sqrt(w)-scaled outlier parameters, sorted order
  Eigen::VectorXd alpha;    // alpha_w / sqrt(w), 0 where w = 0
  double lambda = 0.0;
  std::vector<double> objective_trace;  // one entry per (b, a) cycle
  double objective = 0.0;               // at the returned (beta, alpha_w)
  std::size_t iterations = 0;
  bool converged = false;               // tol > 0 and the stopping rule fired
};

/// Proximal map of (lambda) * |.| for the squared loss: 0 when |r| <= lambda/2,
/// otherwise r - sign(r) * lambda/2.
Eigen::VectorXd soft_threshold_step(const Eigen::VectorXd& residual_w, double lambda);

/// ||yw - xw b - a_w||^2 + lambda * ||a_w||_1
double penalized_objective(const WeightedDesign& d, const Eigen::VectorXd& b,
                           const Eigen::VectorXd& a_w, double lambda);

/// l1-penalized Kaplan-Meier weighted least squares with per-observation
/// mean-shift parameters, computed by alternating exact minimization over b
/// (weighted OLS) and a (soft thresholding), starting from a = 0. After the
/// last cycle beta is refreshed as wls_solve(yw - alpha_w), so the returned
/// pair satisfies the profile identity beta = beta(alpha).
PenalizedFit fit_penalized(const SortedSample& s, const KMWeightSet& kw,
                           const PenalizedConfig& cfg = {});

}  // namespace censreg
