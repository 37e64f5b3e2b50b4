#include "censreg/simulation.hpp"

#include <atomic>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <optional>
#include <ostream>
#include <thread>

#include "censreg/errors.hpp"
#include "censreg/inference.hpp"
#include "censreg/km_weights.hpp"
#include "censreg/rng.hpp"
#include "censreg/stute.hpp"

namespace censreg {

SimulatedData simulate_dgp(const DgpConfig& cfg) {
  const auto n = static_cast<Eigen::Index>(cfg.n);
  Rng rng(cfg.seed);
  Eigen::VectorXd y(n);
  Eigen::MatrixXd x(n, 2);
  Eigen::VectorXd alpha(n);
  std::vector<int> delta(cfg.n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double x2 = rng.uniform();
    const double xi = rng.normal();
    const double c = rng.normal(cfg.mu, 1.0);
    alpha[i] = x2 < cfg.outlier_cutoff ? 0.0 : cfg.outlier_shift;
    const double t = cfg.beta[0] + cfg.beta[1] * x2 + alpha[i] + xi;
    x(i, 0) = 1.0;
    x(i, 1) = x2;
    y[i] = std::min(t, c);
    delta[static_cast<std::size_t>(i)] = t <= c ? 1 : 0;
  }
  return {SurvivalSample(std::move(y), std::move(delta), std::move(x)), std::move(alpha)};
}

SurvivalSample generate_sample(const DgpConfig& cfg) { return simulate_dgp(cfg).sample; }

std::string to_string(Estimator e) {
  switch (e) {
    case Estimator::Stute: return "stute";
    case Estimator::Penalized: return "penalized";
    case Estimator::TwoStep: return "two-step";
  }
  return "unknown";
}

StudyConfig desk_profile() {
  StudyConfig cfg;
  cfg.base.n = 500;
  cfg.reps = 200;
  cfg.mu_grid = {2.0, 3.0, 4.0, 5.0};
  return cfg;
}

StudyConfig paper_profile() {
  StudyConfig cfg;
  cfg.base.n = 1000;
  cfg.reps = 1000;
  cfg.mu_grid.clear();
  for (int k = 20; k <= 50; ++k) cfg.mu_grid.push_back(k / 10.0);
  return cfg;
}

const ReportRow& MonteCarloReport::row(Estimator e, double mu) const {
  for (const auto& r : rows) {
    if (r.estimator == e && r.mu == mu) return r;
  }
  throw ValidationError("no report row for " + to_string(e) + " at mu = " + std::to_string(mu));
}

namespace {

ReplicationOutcome summarize(const InferenceResult& inf, std::size_t k, double truth) {
  const auto i = static_cast<Eigen::Index>(k);
  ReplicationOutcome o;
  o.ok = true;
  o.estimate = inf.beta[i];
  o.variance_hat = inf.cov_beta(i, i);
  o.covered = inf.ci_lower[i] <= truth && truth <= inf.ci_upper[i];
  return o;
}

Replication run_replication(const StudyConfig& cfg, std::size_t mu_index, std::size_t rep) {
  DgpConfig dgp = cfg.base;
  dgp.mu = cfg.mu_grid[mu_index];
  dgp.seed = derive_seed(cfg.base.seed, mu_index, rep);

  Replication out;
  out.mu_index = mu_index;
  out.rep = rep;
  out.outcomes.resize(cfg.estimators.size());

  const auto data = cfg.generator(dgp);
  const auto sorted = sort_sample(data.sample);
  const auto kw = km_weights(sorted);
  out.pi_uc_hat = kw.pi_uc_hat;
  const double truth = dgp.beta[static_cast<Eigen::Index>(cfg.coefficient)];

  // The penalized fit is shared by the one- and two-step estimators.
  std::optional<PenalizedFit> pen;
  bool pen_failed = false;
  auto penalized = [&]() -> const PenalizedFit* {
    if (!pen && !pen_failed) {
      try {
        pen = fit_penalized(sorted, kw, cfg.penalized);
      } catch (const SingularGramError&) {
        pen_failed = true;
      }
    }
    return pen ? &*pen : nullptr;
  };

  for (std::size_t e = 0; e < cfg.estimators.size(); ++e) {
    try {
      switch (cfg.estimators[e]) {
        case Estimator::Stute:
          out.outcomes[e] =
              summarize(sandwich_ci(sorted, kw, stute_fit(sorted, kw), cfg.level),
                        cfg.coefficient, truth);
          break;
        case Estimator::Penalized:
          if (const auto* f = penalized()) {
            out.outcomes[e] = summarize(sandwich_ci(sorted, kw, *f, cfg.level),
                                        cfg.coefficient, truth);
          }
          break;
        case Estimator::TwoStep:
          if (const auto* f = penalized()) {
            const auto ts = fit_two_step(sorted, kw, *f, cfg.tau0);
            out.outcomes[e] =
                summarize(sandwich_ci(sorted, kw, ts, cfg.level), cfg.coefficient, truth);
          }
          break;
      }
    } catch (const SingularGramError&) {
      out.outcomes[e] = ReplicationOutcome{};
    }
  }
  return out;
}

}  // namespace

MonteCarloReport run_study(const StudyConfig& cfg) {
  if (cfg.reps < 2) throw ValidationError("reps must be at least 2");
  if (cfg.mu_grid.empty()) throw ValidationError("mu grid is empty");
  if (cfg.estimators.empty()) throw ValidationError("no estimators requested");
  if (cfg.coefficient >= 2) throw ValidationError("coefficient index out of range");

  const auto start = std::chrono::steady_clock::now();
  const std::size_t cells = cfg.mu_grid.size();
  const std::size_t tasks = cells * cfg.reps;

  MonteCarloReport report;
  report.reps = cfg.reps;
  report.replications.resize(tasks);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t t = next++; t < tasks; t = next++) {
      report.replications[t] = run_replication(cfg, t / cfg.reps, t % cfg.reps);
    }
  };
  const std::size_t threads = std::max<std::size_t>(1, std::min(cfg.threads, tasks));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
  }

  for (std::size_t m = 0; m < cells; ++m) {
    const double mu = cfg.mu_grid[m];
    const double truth = cfg.base.beta[static_cast<Eigen::Index>(cfg.coefficient)];
    double pi_sum = 0.0;
    for (std::size_t r = 0; r < cfg.reps; ++r) pi_sum += report.replications[m * cfg.reps + r].pi_uc_hat;

    for (std::size_t e = 0; e < cfg.estimators.size(); ++e) {
      ReportRow row;
      row.estimator = cfg.estimators[e];
      row.mu = mu;
      row.pi_uc_hat = pi_sum / static_cast<double>(cfg.reps);

      double sum = 0.0;
      double covered = 0.0;
      for (std::size_t r = 0; r < cfg.reps; ++r) {
        const auto& o = report.replications[m * cfg.reps + r].outcomes[e];
        if (!o.ok) {
          ++report.failed_fits;
          continue;
        }
        ++row.reps_used;
        sum += o.estimate;
        covered += o.covered ? 1.0 : 0.0;
      }
      if (row.reps_used > 0) {
        const double used = static_cast<double>(row.reps_used);
        const double mean = sum / used;
        double var = 0.0;
        double mse = 0.0;
        for (std::size_t r = 0; r < cfg.reps; ++r) {
          const auto& o = report.replications[m * cfg.reps + r].outcomes[e];
          if (!o.ok) continue;
          var += (o.estimate - mean) * (o.estimate - mean);
          mse += (o.estimate - truth) * (o.estimate - truth);
        }
        row.bias = mean - truth;
        row.variance = var / used;
        row.mse = mse / used;
        row.coverage = covered / used;
      } else {
        row.bias = row.variance = row.mse = row.coverage = std::nan("");
      }
      report.rows.push_back(row);
    }
  }

  report.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

void write_report_csv(std::ostream& out, const MonteCarloReport& report) {
  out << "estimator,mu,pi_uc_hat,bias,variance,mse,coverage,reps_used\n";
  for (const auto& r : report.rows) {
    out << to_string(r.estimator) << ',' << format_double(r.mu) << ','
        << format_double(r.pi_uc_hat) << ',' << format_double(r.bias) << ','
        << format_double(r.variance) << ',' << format_double(r.mse) << ','
        << format_double(r.coverage) << ',' << r.reps_used << '\n';
  }
}

}  // namespace censreg
