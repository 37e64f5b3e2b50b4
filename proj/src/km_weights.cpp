#include "censreg/km_weights.hpp"

#include <cmath>

namespace censreg {

KMWeightSet km_weights(const SortedSample& s) {
  const std::size_t n = s.n();
  const auto& delta = s.base().delta();
  KMWeightSet out;
  out.w.resize(static_cast<Eigen::Index>(n));

  // prod_{j<i} ((n-j)/(n-j+1))^delta_(j), 1-based j.
  double running = 1.0;
  std::size_t events = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double at_risk = static_cast<double>(n - i);
    out.w[i] = delta[i] ? running / at_risk : 0.0;
    if (delta[i]) {
      running *= (at_risk - 1.0) / at_risk;
      ++events;
    }
  }
  out.sqrt_w = out.w.cwiseSqrt();
  out.pi_uc_hat = static_cast<double>(events) / static_cast<double>(n);
  out.max_w = n ? out.w.maxCoeff() : 0.0;
  return out;
}

double lambda_rule(std::size_t n, double pi_uc_hat, double lambda0) {
  return std::pow(static_cast<double>(n), lambda0 - pi_uc_hat / 2.0);
}

}  // namespace censreg
