#include "censreg/two_step.hpp"

#include <cmath>

#include "censreg/errors.hpp"

namespace censreg {

std::vector<std::size_t> detect_outliers(const PenalizedFit& fit, double tau0) {
  if (!(tau0 >= 0.0)) throw ValidationError("tau0 must be nonnegative");
  std::vector<std::size_t> out;
  for (Eigen::Index i = 0; i < fit.alpha_w.size(); ++i) {
    if (std::abs(fit.alpha_w[i]) > tau0) out.push_back(static_cast<std::size_t>(i));
  }
  return out;
}

TwoStepFit fit_two_step(const SortedSample& s, const KMWeightSet& kw, const PenalizedFit& fit,
                        double tau0) {
  TwoStepFit out;
  out.tau0 = tau0;
  out.outliers = detect_outliers(fit, tau0);

  const auto full = build_weighted_design(s, kw);
  Eigen::MatrixXd xw = full.xw;
  Eigen::VectorXd yw = full.yw;
  for (const auto i : out.outliers) {
    xw.row(static_cast<Eigen::Index>(i)).setZero();
    yw[static_cast<Eigen::Index>(i)] = 0.0;
  }
  const auto kept = make_weighted_design(std::move(xw), std::move(yw));

  try {
    out.beta_tilde = wls_solve(kept, kept.yw).beta;
  } catch (const SingularGramError& e) {
    throw SingularGramError("two-step refit after removing " +
                                std::to_string(out.outliers.size()) + " of " +
                                std::to_string(s.n()) + " observations: " + e.what(),
                            e.min_eigenvalue(), e.max_eigenvalue());
  }

  const Eigen::Index n = full.yw.size();
  out.alpha_tilde_w = Eigen::VectorXd::Zero(n);
  out.alpha_tilde = Eigen::VectorXd::Zero(n);
  for (const auto j : out.outliers) {
    const auto i = static_cast<Eigen::Index>(j);
    out.alpha_tilde_w[i] = full.yw[i] - full.xw.row(i).dot(out.beta_tilde);
    if (kw.w[i] > 0.0) out.alpha_tilde[i] = out.alpha_tilde_w[i] / kw.sqrt_w[i];
  }
  return out;
}

}  // namespace censreg
