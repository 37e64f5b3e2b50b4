#include "censreg/inference.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/distributions/normal.hpp>

#include "censreg/errors.hpp"

namespace censreg {

CensoringKM::CensoringKM(const SortedSample& s) {
  const auto& y = s.base().y();
  const auto& delta = s.base().delta();
  const std::size_t n = s.n();
  double surv = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (delta[i]) continue;
    const double before = surv;
    surv *= 1.0 - 1.0 / static_cast<double>(n - i);
    if (!times_.empty() && times_.back() == y[i]) {
      survival_.back() = surv;
      jumps_.back() += before - surv;
    } else {
      times_.push_back(y[i]);
      survival_.push_back(surv);
      jumps_.push_back(before - surv);
    }
  }
}

double CensoringKM::eval(double t) const {
  const auto it = std::upper_bound(times_.begin(), times_.end(), t);
  if (it == times_.begin()) return 0.0;
  return 1.0 - survival_[static_cast<std::size_t>(it - times_.begin()) - 1];
}

double CensoringKM::eval_left(double t) const { return 1.0 - survival_left(t); }

double CensoringKM::survival_left(double t) const {
  const auto it = std::lower_bound(times_.begin(), times_.end(), t);
  if (it == times_.begin()) return 1.0;
  return survival_[static_cast<std::size_t>(it - times_.begin()) - 1];
}

EmpiricalCdf::EmpiricalCdf(const SortedSample& s)
    : values_(s.base().y().data(), s.base().y().data() + s.n()) {}

double EmpiricalCdf::operator()(double t) const {
  if (values_.empty()) return 0.0;
  const auto le = std::upper_bound(values_.begin(), values_.end(), t) - values_.begin();
  return static_cast<double>(le) / static_cast<double>(values_.size());
}

std::size_t EmpiricalCdf::count_above(double t) const {
  const auto le = std::upper_bound(values_.begin(), values_.end(), t) - values_.begin();
  return values_.size() - static_cast<std::size_t>(le);
}

PsiMatrix compute_psi(const SortedSample& s, const Eigen::VectorXd& beta,
                      const Eigen::VectorXd& alpha) {
  const auto& base = s.base();
  const auto& y = base.y();
  const auto& x = base.x();
  const auto& delta = base.delta();
  const auto n = static_cast<Eigen::Index>(s.n());
  const auto p = static_cast<Eigen::Index>(s.p());
  if (beta.size() != p || alpha.size() != n) {
    throw ValidationError("compute_psi: beta/alpha dimensions do not match the sample");
  }
  const double nd = static_cast<double>(n);
  const CensoringKM g(s);

  PsiMatrix out;
  const Eigen::VectorXd xi = y - x * beta - alpha;

  // lead(i, k) = delta_i X_ik xi_i / (1 - G(Y_i-))
  Eigen::MatrixXd lead = Eigen::MatrixXd::Zero(n, p);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!delta[i]) continue;
    double denom = g.survival_left(y[i]);
    if (denom < kTailFloor) {
      denom = kTailFloor;
      ++out.floored_terms;
    }
    lead.row(i) = x.row(i) * (xi[i] / denom);
  }

  // Tie groups [begin, end) of equal y. above(g) = sum of lead over rows with
  // y strictly greater than the group value; count_above likewise.
  std::vector<Eigen::Index> group_begin;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (i == 0 || y[i] != y[i - 1]) group_begin.push_back(i);
  }
  const auto groups = group_begin.size();
  group_begin.push_back(n);

  Eigen::MatrixXd above(static_cast<Eigen::Index>(groups), p);
  Eigen::RowVectorXd acc = Eigen::RowVectorXd::Zero(p);
  for (std::size_t gi = groups; gi-- > 0;) {
    above.row(static_cast<Eigen::Index>(gi)) = acc;
    for (Eigen::Index i = group_begin[gi]; i < group_begin[gi + 1]; ++i) acc += lead.row(i);
  }

  out.psi = lead;
  Eigen::RowVectorXd gamma2 = Eigen::RowVectorXd::Zero(p);  // over groups strictly below
  for (std::size_t gi = 0; gi < groups; ++gi) {
    const auto gb = group_begin[gi];
    const auto ge = group_begin[gi + 1];
    const auto count_above = static_cast<double>(n - ge);
    const auto above_row = above.row(static_cast<Eigen::Index>(gi));

    Eigen::RowVectorXd gamma1 = Eigen::RowVectorXd::Zero(p);
    if (n - ge > 0) gamma1 = above_row / count_above;

    std::size_t censored = 0;
    for (Eigen::Index i = gb; i < ge; ++i) {
      out.psi.row(i) -= gamma2;
      if (!delta[i]) {
        out.psi.row(i) += gamma1;
        ++censored;
      }
    }

    // (1/n^2) * above / (1 - H(y))^2 per censored j in this group.
    if (censored > 0) {
      double tail = count_above / nd;
      if (tail < kTailFloor) {
        tail = kTailFloor;
        out.floored_terms += censored;
      }
      gamma2 += above_row * (static_cast<double>(censored) / (nd * nd * tail * tail));
    }
  }
  return out;
}

double normal_critical_value(double level) {
  if (!(level > 0.0 && level < 1.0)) throw ValidationError("confidence level must be in (0, 1)");
  return boost::math::quantile(boost::math::normal_distribution<double>(), (1.0 + level) / 2.0);
}

namespace {

Eigen::MatrixXd checked_inverse(const Eigen::MatrixXd& gram) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (!(hi > 0.0) || lo <= kSingularGramTolerance * hi) {
    std::ostringstream msg;
    msg << "weighted Gram matrix is singular (eigenvalues " << lo << " .. " << hi << ")";
    throw SingularGramError(msg.str(), lo, hi);
  }
  return eig.eigenvectors() * eig.eigenvalues().cwiseInverse().asDiagonal() *
         eig.eigenvectors().transpose();
}

}  // namespace

InferenceResult sandwich_ci(const SortedSample& s, const KMWeightSet& kw,
                            const Eigen::VectorXd& beta, const Eigen::VectorXd& alpha,
                            double level) {
  InferenceResult r;
  r.level = level;
  r.z = normal_critical_value(level);
  r.beta = beta;

  const auto design = build_weighted_design(s, kw);
  r.sigma_x_hat = design.gram;
  const Eigen::MatrixXd inv = checked_inverse(design.gram);

  const auto psi = compute_psi(s, beta, alpha);
  r.tail_warnings = psi.floored_terms;
  const double nd = static_cast<double>(s.n());
  const Eigen::MatrixXd centered = psi.psi.rowwise() - psi.psi.colwise().mean();
  r.sigma_hat = centered.transpose() * centered / nd;
  r.sigma_hat = 0.5 * (r.sigma_hat + r.sigma_hat.transpose()).eval();

  r.cov_beta = inv * r.sigma_hat * inv / nd;
  r.cov_beta = 0.5 * (r.cov_beta + r.cov_beta.transpose()).eval();
  r.std_errors = r.cov_beta.diagonal().cwiseMax(0.0).cwiseSqrt();
  r.ci_lower = beta - r.z * r.std_errors;
  r.ci_upper = beta + r.z * r.std_errors;
  return r;
}

InferenceResult sandwich_ci(const SortedSample& s, const KMWeightSet& kw, const WlsFit& fit,
                            double level) {
  return sandwich_ci(s, kw, fit.beta, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(s.n())),
                     level);
}

InferenceResult sandwich_ci(const SortedSample& s, const KMWeightSet& kw,
                            const PenalizedFit& fit, double level) {
  return sandwich_ci(s, kw, fit.beta, fit.alpha, level);
}

InferenceResult sandwich_ci(const SortedSample& s, const KMWeightSet& kw,
                            const TwoStepFit& fit, double level) {
  return sandwich_ci(s, kw, fit.beta_tilde, fit.alpha_tilde, level);
}

}  // namespace censreg
