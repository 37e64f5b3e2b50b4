#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "censreg/data_model.hpp"
#include "censreg/errors.hpp"
#include "censreg/inference.hpp"
#include "censreg/km_weights.hpp"
#include "censreg/penalized.hpp"
#include "censreg/simulation.hpp"
#include "censreg/stute.hpp"
#include "censreg/two_step.hpp"

namespace censreg::cli {
namespace {

struct FitArgs {
  std::string input;
  std::string method = "two-step";
  double lambda0 = kDefaultLambda0;
  std::optional<double> lambda;
  double tau0 = kDefaultTau0;
  std::size_t max_iter = 10;
  double level = 0.95;
  std::string format = "table";
};

struct SimulateArgs {
  std::string profile = "desk";
  std::uint64_t seed = 0;
  std::size_t threads = std::max(1u, std::thread::hardware_concurrency());
  std::string output;
  std::optional<std::size_t> reps;
  std::optional<std::size_t> n;
};

struct OutlierRow {
  std::size_t row;  // 1-based data row in the input file
  double alpha_w;
};

struct FitReport {
  std::string method;
  std::size_t n = 0;
  std::size_t p = 0;
  std::size_t uncensored = 0;
  InferenceResult inference;
  std::optional<double> lambda;
  std::optional<std::size_t> iterations;
  std::optional<double> tau0;
  std::vector<OutlierRow> outliers;
};

FitReport do_fit(const FitArgs& a) {
  const auto sample = load_csv(a.input);
  const auto sorted = sort_sample(sample);
  const auto kw = km_weights(sorted);

  FitReport rep;
  rep.method = a.method;
  rep.n = sample.n();
  rep.p = sample.p();
  rep.uncensored = sample.uncensored_count();

  if (a.method == "stute") {
    rep.inference = sandwich_ci(sorted, kw, stute_fit(sorted, kw), a.level);
    return rep;
  }

  PenalizedConfig cfg;
  cfg.lambda0 = a.lambda0;
  cfg.max_iter = a.max_iter;
  cfg.lambda_override = a.lambda;
  const auto pen = fit_penalized(sorted, kw, cfg);
  rep.lambda = pen.lambda;
  rep.iterations = pen.iterations;
  rep.tau0 = a.tau0;

  const auto flagged = detect_outliers(pen, a.tau0);
  for (const auto i : flagged) {
    rep.outliers.push_back({sorted.perm()[i] + 1, pen.alpha_w[static_cast<Eigen::Index>(i)]});
  }
  std::sort(rep.outliers.begin(), rep.outliers.end(),
            [](const OutlierRow& l, const OutlierRow& r) { return l.row < r.row; });

  if (a.method == "penalized") {
    rep.inference = sandwich_ci(sorted, kw, pen, a.level);
  } else {
    rep.inference = sandwich_ci(sorted, kw, fit_two_step(sorted, kw, pen, a.tau0), a.level);
  }
  return rep;
}

std::string coef_name(std::size_t k) { return "x" + std::to_string(k + 1); }

void print_table(std::ostream& out, const FitReport& r) {
  const auto& inf = r.inference;
  out << "method: " << r.method << "  n: " << r.n << "  p: " << r.p
      << "  uncensored: " << r.uncensored << '\n';
  if (r.lambda) {
    out << "lambda: " << format_double(*r.lambda) << "  iterations: " << *r.iterations << '\n';
  }
  out << "confidence level: " << format_double(inf.level) << '\n';
  if (inf.tail_warnings > 0) out << "warning: " << inf.tail_warnings << " tail denominators floored\n";
  out << '\n';
  out << std::left << std::setw(12) << "coefficient" << std::setw(26) << "estimate"
      << std::setw(26) << "std_error" << std::setw(26) << "ci_lower"
      << "ci_upper" << '\n';
  for (Eigen::Index k = 0; k < inf.beta.size(); ++k) {
    out << std::setw(12) << coef_name(static_cast<std::size_t>(k)) << std::setw(26)
        << format_double(inf.beta[k]) << std::setw(26) << format_double(inf.std_errors[k])
        << std::setw(26) << format_double(inf.ci_lower[k]) << format_double(inf.ci_upper[k])
        << '\n';
  }
  if (r.tau0) {
    out << "\noutliers (|alpha_w| > " << format_double(*r.tau0) << "): " << r.outliers.size()
        << '\n';
    if (!r.outliers.empty()) {
      out << std::setw(12) << "row" << "alpha_w" << '\n';
      for (const auto& o : r.outliers) {
        out << std::setw(12) << o.row << format_double(o.alpha_w) << '\n';
      }
    }
  }
}

void print_csv(std::ostream& out, const FitReport& r) {
  const auto& inf = r.inference;
  out << "coefficient,estimate,std_error,ci_lower,ci_upper\n";
  for (Eigen::Index k = 0; k < inf.beta.size(); ++k) {
    out << coef_name(static_cast<std::size_t>(k)) << ',' << format_double(inf.beta[k]) << ','
        << format_double(inf.std_errors[k]) << ',' << format_double(inf.ci_lower[k]) << ','
        << format_double(inf.ci_upper[k]) << '\n';
  }
  if (r.lambda) {
    out << "\nlambda,iterations,tau0,outliers\n"
        << format_double(*r.lambda) << ',' << *r.iterations << ',' << format_double(*r.tau0)
        << ',' << r.outliers.size() << '\n';
    out << "\nrow,alpha_w\n";
    for (const auto& o : r.outliers) out << o.row << ',' << format_double(o.alpha_w) << '\n';
  }
}

void print_json_lines(std::ostream& out, const FitReport& r) {
  using nlohmann::json;
  const auto& inf = r.inference;
  json fit = {{"record", "fit"},           {"method", r.method},
              {"n", r.n},                  {"p", r.p},
              {"uncensored", r.uncensored}, {"level", inf.level},
              {"tail_warnings", inf.tail_warnings}};
  if (r.lambda) {
    fit["lambda"] = *r.lambda;
    fit["iterations"] = *r.iterations;
    fit["tau0"] = *r.tau0;
  }
  out << fit.dump() << '\n';
  for (Eigen::Index k = 0; k < inf.beta.size(); ++k) {
    json c = {{"record", "coefficient"},
              {"name", coef_name(static_cast<std::size_t>(k))},
              {"estimate", inf.beta[k]},
              {"std_error", inf.std_errors[k]},
              {"ci_lower", inf.ci_lower[k]},
              {"ci_upper", inf.ci_upper[k]}};
    out << c.dump() << '\n';
  }
  for (const auto& o : r.outliers) {
    out << json{{"record", "outlier"}, {"row", o.row}, {"alpha_w", o.alpha_w}}.dump() << '\n';
  }
}

int cmd_fit(const FitArgs& a, std::ostream& out) {
  const auto report = do_fit(a);
  if (a.format == "csv") {
    print_csv(out, report);
  } else if (a.format == "json-lines") {
    print_json_lines(out, report);
  } else {
    print_table(out, report);
  }
  return 0;
}

int cmd_simulate(const SimulateArgs& a, std::ostream& err) {
  StudyConfig cfg = a.profile == "paper" ? paper_profile() : desk_profile();
  cfg.base.seed = a.seed;
  cfg.threads = a.threads;
  if (a.reps) cfg.reps = *a.reps;
  if (a.n) cfg.base.n = *a.n;

  std::ofstream file(a.output);
  if (!file) {
    err << "error: cannot write " << a.output << '\n';
    return 1;
  }
  const auto report = run_study(cfg);
  write_report_csv(file, report);
  file.close();
  if (!file) {
    err << "error: failed writing " << a.output << '\n';
    return 1;
  }
  err << "simulate: " << cfg.mu_grid.size() << " mu values x " << cfg.reps
      << " replications, n = " << cfg.base.n << ", " << report.failed_fits
      << " failed fits, " << std::fixed << std::setprecision(2) << report.runtime_seconds
      << " s\n";
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Robust censored linear regression with Kaplan-Meier weights"};
  app.require_subcommand(1);

  FitArgs fit;
  auto* fit_cmd = app.add_subcommand("fit", "Fit a model to a y,delta,x1,...,xp CSV file");
  fit_cmd->add_option("input,--input", fit.input, "input CSV")->required();
  fit_cmd->add_option("--method", fit.method, "estimator")
      ->check(CLI::IsMember({"stute", "penalized", "two-step"}))
      ->capture_default_str();
  fit_cmd->add_option("--lambda0", fit.lambda0, "exponent offset of the penalty rule")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  fit_cmd->add_option("--lambda", fit.lambda, "explicit penalty level")
      ->check(CLI::PositiveNumber);
  fit_cmd->add_option("--tau0", fit.tau0, "outlier detection threshold on |alpha_w|")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  fit_cmd->add_option("--max-iter", fit.max_iter, "alternating iterations")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  fit_cmd->add_option("--level", fit.level, "confidence level")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  fit_cmd->add_option("--format", fit.format, "output format")
      ->check(CLI::IsMember({"table", "csv", "json-lines"}))
      ->capture_default_str();

  SimulateArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Run the Monte Carlo study");
  sim_cmd->add_option("--profile", sim.profile, "desk or paper")
      ->check(CLI::IsMember({"desk", "paper"}))
      ->capture_default_str();
  sim_cmd->add_option("--seed", sim.seed, "base seed")->capture_default_str();
  sim_cmd->add_option("--threads", sim.threads, "worker threads")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sim_cmd->add_option("--output,-o", sim.output, "report CSV path")->required();
  sim_cmd->add_option("--reps", sim.reps, "override replications per mu")
      ->check(CLI::Range(2, 1000000));
  sim_cmd->add_option("--n", sim.n, "override sample size")->check(CLI::PositiveNumber);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 1;
  }

  try {
    if (fit_cmd->parsed()) return cmd_fit(fit, out);
    return cmd_simulate(sim, err);
  } catch (const SingularGramError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace censreg::cli
