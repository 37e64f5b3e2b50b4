#pragma once

#include <Eigen/Dense>

#include "censreg/data_model.hpp"
#include "censreg/km_weights.hpp"

namespace censreg {

/// Rows of X and entries of Y scaled by sqrt(w), with the p x p Gram matrix.
struct WeightedDesign {
  Eigen::MatrixXd xw;
  Eigen::VectorXd yw;
  Eigen::MatrixXd gram;
};

struct WlsFit {
  Eigen::VectorXd beta;
  Eigen::VectorXd residuals_w;  // target_w - xw * beta
  double gram_condition = 0.0;  // largest / smallest eigenvalue of gram
};

/// Relative eigenvalue floor below which the Gram matrix counts as singular.
inline constexpr double kSingularGramTolerance = 1e-12;

WeightedDesign build_weighted_design(const SortedSample& s, const KMWeightSet& kw);

/// Design from already-scaled rows; gram = xw' xw.
WeightedDesign make_weighted_design(Eigen::MatrixXd xw, Eigen::VectorXd yw);

/// argmin_b ||target_w - xw b||^2 through a Cholesky factorization of gram.
/// Throws SingularGramError when min eig(gram) <= 1e-12 * max eig(gram).
WlsFit wls_solve(const WeightedDesign& d, const Eigen::VectorXd& target_w);

/// Kaplan-Meier weighted least squares of Y on X (the Stute estimator).
WlsFit stute_fit(const SortedSample& s, const KMWeightSet& kw);

}  // namespace censreg
