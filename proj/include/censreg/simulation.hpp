#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "censreg/data_model.hpp"
#include "censreg/penalized.hpp"
#include "censreg/two_step.hpp"

namespace censreg {

/// Y = X'beta + alpha + xi, X = (1, U[0,1]), xi ~ N(0,1), censored by
/// C ~ N(mu, 1). alpha = outlier_shift when X2 >= outlier_cutoff, else 0.
struct DgpConfig {
  std::size_t n = 1000;
  Eigen::Vector2d beta{1.0, 1.0};
  double outlier_shift = -20.0;
  double outlier_cutoff = 1.0 - 5e-3;
  double mu = 5.0;
  std::uint64_t seed = 0;
};

struct SimulatedData {
  SurvivalSample sample;
  Eigen::VectorXd alpha;  // true shifts, original row order
};

/// Draw order per row: X2, xi, C, all from one Rng seeded with cfg.seed.
SimulatedData simulate_dgp(const DgpConfig& cfg);
SurvivalSample generate_sample(const DgpConfig& cfg);

using SampleGenerator = std::function<SimulatedData(const DgpConfig&)>;

enum class Estimator { Stute, Penalized, TwoStep };

std::string to_string(Estimator e);

inline const std::vector<Estimator> kAllEstimators{Estimator::Stute, Estimator::Penalized,
                                                   Estimator::TwoStep};

struct StudyConfig {
  std::vector<double> mu_grid{2.0, 3.0, 4.0, 5.0};
  std::size_t reps = 200;
  DgpConfig base;
  std::vector<Estimator> estimators = kAllEstimators;
  PenalizedConfig penalized;
  double tau0 = kDefaultTau0;
  double level = 0.95;
  std::size_t coefficient = 1;  // reported coefficient, 0-based
  std::size_t threads = 1;
  SampleGenerator generator = simulate_dgp;
};

/// Small grid suitable for CI: n = 500, 200 replications, mu in {2,3,4,5}.
StudyConfig desk_profile();
/// n = 1000, 1000 replications, mu = 2.0, 2.1, ..., 5.0.
StudyConfig paper_profile();

struct ReplicationOutcome {
  bool ok = false;
  double estimate = 0.0;
  double variance_hat = 0.0;  // estimated Var of the reported coefficient
  bool covered = false;
};

struct Replication {
  std::size_t mu_index = 0;
  std::size_t rep = 0;
  double pi_uc_hat = 0.0;
  std::vector<ReplicationOutcome> outcomes;  // parallel to StudyConfig::estimators
};

struct ReportRow {
  Estimator estimator{};
  double mu = 0.0;
  double pi_uc_hat = 0.0;
  double bias = 0.0;
  double variance = 0.0;
  double mse = 0.0;
  double coverage = 0.0;
  std::size_t reps_used = 0;
};

struct MonteCarloReport {
  std::vector<ReportRow> rows;  // grouped by mu, then estimator order
  std::vector<Replication> replications;  // (mu, rep) order
  std::size_t reps = 0;
  std::size_t failed_fits = 0;  // SingularGram failures excluded from rows
  double runtime_seconds = 0.0;

  const ReportRow& row(Estimator e, double mu) const;
};

MonteCarloReport run_study(const StudyConfig& cfg);

/// Columns: estimator,mu,pi_uc_hat,bias,variance,mse,coverage,reps_used.
void write_report_csv(std::ostream& out, const MonteCarloReport& report);

}  // namespace censreg
