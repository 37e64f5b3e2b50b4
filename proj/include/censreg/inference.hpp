#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "censreg/data_model.hpp"
#include "censreg/km_weights.hpp"
#include "censreg/penalized.hpp"
#include "censreg/stute.hpp"
#include "censreg/two_step.hpp"

namespace censreg {

/// Kaplan-Meier estimator of the censoring distribution G(t) = P(C <= t),
/// built with 1 - delta as the event indicator. Failures tied with a
/// censoring time leave the risk set first.
class CensoringKM {
 public:
  explicit CensoringKM(const SortedSample& s);

  /// G(t)
  double eval(double t) const;
  /// G(t-)
  double eval_left(double t) const;
  /// 1 - G(t-), computed without cancellation.
  double survival_left(double t) const;

  const std::vector<double>& support() const noexcept { return times_; }
  const std::vector<double>& jumps() const noexcept { return jumps_; }

 private:
  std::vector<double> times_;     // distinct censoring times, ascending
  std::vector<double> survival_;  // 1 - G at each time (right-continuous)
  std::vector<double> jumps_;
};

/// Right-continuous empirical CDF of the observed outcomes.
class EmpiricalCdf {
 public:
  explicit EmpiricalCdf(const SortedSample& s);

  double operator()(double t) const;
  /// Number of observations strictly greater than t.
  std::size_t count_above(double t) const;

 private:
  std::vector<double> values_;
};

inline constexpr double kTailFloor = 1e-10;

struct PsiMatrix {
  Eigen::MatrixXd psi;             // n x p, sorted order
  std::size_t floored_terms = 0;   // denominators raised to kTailFloor
};

/// Plug-in influence terms
///   psi_ki = X_ik xi_i delta_i / (1 - G(Y_i-)) + gamma1_k(Y_i)(1 - delta_i) - gamma2_k(Y_i)
/// with residuals xi = Y - X beta - alpha. alpha is in sorted order and on
/// the unscaled outcome scale. O(n p) after sorting.
PsiMatrix compute_psi(const SortedSample& s, const Eigen::VectorXd& beta,
                      const Eigen::VectorXd& alpha);

struct InferenceResult {
  Eigen::VectorXd beta;
  Eigen::MatrixXd sigma_x_hat;  // xw' xw
  Eigen::MatrixXd sigma_hat;    // centered covariance of the psi rows (1/n)
  Eigen::MatrixXd cov_beta;     // sigma_x^-1 sigma sigma_x^-1 / n
  Eigen::VectorXd std_errors;
  Eigen::VectorXd ci_lower;
  Eigen::VectorXd ci_upper;
  double level = 0.95;
  double z = 0.0;
  std::size_t tail_warnings = 0;
};

/// Standard normal quantile z_{(1+level)/2}.
double normal_critical_value(double level);

/// Sandwich covariance and normal confidence intervals for `beta`, whose
/// residuals are Y - X beta - alpha.
InferenceResult sandwich_ci(const SortedSample& s, const KMWeightSet& kw,
                            const Eigen::VectorXd& beta, const Eigen::VectorXd& alpha,
                            double level = 0.95);

InferenceResult sandwich_ci(const SortedSample& s, const KMWeightSet& kw, const WlsFit& fit,
                            double level = 0.95);
InferenceResult sandwich_ci(const SortedSample& s, const KMWeightSet& kw,
                            const PenalizedFit& fit, double level = 0.95);
InferenceResult sandwich_ci(const SortedSample& s, const KMWeightSet& kw,
                            const TwoStepFit& fit, double level = 0.95);

}  // namespace censreg
