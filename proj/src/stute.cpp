#include "censreg/stute.hpp"

#include <sstream>

#include "censreg/errors.hpp"

namespace censreg {

WeightedDesign build_weighted_design(const SortedSample& s, const KMWeightSet& kw) {
  const auto& base = s.base();
  Eigen::MatrixXd xw = kw.sqrt_w.asDiagonal() * base.x();
  Eigen::VectorXd yw = kw.sqrt_w.cwiseProduct(base.y());
  return make_weighted_design(std::move(xw), std::move(yw));
}

WeightedDesign make_weighted_design(Eigen::MatrixXd xw, Eigen::VectorXd yw) {
  WeightedDesign d;
  d.gram = xw.transpose() * xw;
  d.xw = std::move(xw);
  d.yw = std::move(yw);
  return d;
}

WlsFit wls_solve(const WeightedDesign& d, const Eigen::VectorXd& target_w) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(d.gram, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (!(hi > 0.0) || lo <= kSingularGramTolerance * hi) {
    std::ostringstream msg;
    msg << "weighted Gram matrix is singular (eigenvalues " << lo << " .. " << hi
        << "); covariates are collinear after weighting";
    throw SingularGramError(msg.str(), lo, hi);
  }

  WlsFit fit;
  fit.beta = d.gram.llt().solve(d.xw.transpose() * target_w);
  fit.residuals_w = target_w - d.xw * fit.beta;
  fit.gram_condition = hi / lo;
  return fit;
}

WlsFit stute_fit(const SortedSample& s, const KMWeightSet& kw) {
  const auto d = build_weighted_design(s, kw);
  return wls_solve(d, d.yw);
}

}  // namespace censreg
