#include "censreg/penalized.hpp"

#include <cmath>

#include "censreg/errors.hpp"

namespace censreg {

Eigen::VectorXd soft_threshold_step(const Eigen::VectorXd& residual_w, double lambda) {
  if (!(lambda > 0.0)) throw ValidationError("lambda must be positive");
  const double half = lambda / 2.0;
  Eigen::VectorXd out(residual_w.size());
  for (Eigen::Index i = 0; i < residual_w.size(); ++i) {
    const double r = residual_w[i];
    out[i] = std::abs(r) <= half ? 0.0 : r - std::copysign(half, r);
  }
  return out;
}

double penalized_objective(const WeightedDesign& d, const Eigen::VectorXd& b,
                           const Eigen::VectorXd& a_w, double lambda) {
  return (d.yw - d.xw * b - a_w).squaredNorm() + lambda * a_w.lpNorm<1>();
}

PenalizedFit fit_penalized(const SortedSample& s, const KMWeightSet& kw,
                           const PenalizedConfig& cfg) {
  if (cfg.max_iter == 0) throw ValidationError("max_iter must be positive");
  if (cfg.tol < 0.0) throw ValidationError("tol must be nonnegative");

  PenalizedFit fit;
  fit.lambda = cfg.lambda_override ? *cfg.lambda_override
                                   : lambda_rule(s.n(), kw.pi_uc_hat, cfg.lambda0);
  if (!(fit.lambda > 0.0)) throw ValidationError("lambda must be positive");

  const auto d = build_weighted_design(s, kw);
  Eigen::VectorXd a_w = Eigen::VectorXd::Zero(d.yw.size());
  Eigen::VectorXd b;
  fit.objective_trace.reserve(cfg.max_iter);

  for (std::size_t t = 0; t < cfg.max_iter; ++t) {
    b = wls_solve(d, d.yw - a_w).beta;
    const Eigen::VectorXd r = d.yw - d.xw * b;
    a_w = soft_threshold_step(r, fit.lambda);
    const double obj = (r - a_w).squaredNorm() + fit.lambda * a_w.lpNorm<1>();
    fit.objective_trace.push_back(obj);
    fit.iterations = t + 1;
    if (cfg.tol > 0.0 && t > 0 && fit.objective_trace[t - 1] - obj < cfg.tol) {
      fit.converged = true;
      break;
    }
  }

  fit.beta = wls_solve(d, d.yw - a_w).beta;
  fit.objective = penalized_objective(d, fit.beta, a_w, fit.lambda);
  fit.alpha.resize(a_w.size());
  for (Eigen::Index i = 0; i < a_w.size(); ++i) {
    fit.alpha[i] = kw.w[i] > 0.0 ? a_w[i] / kw.sqrt_w[i] : 0.0;
  }
  fit.alpha_w = std::move(a_w);
  return fit;
}

}  // namespace censreg
