#include "censreg/data_model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "censreg/errors.hpp"

namespace censreg {

SurvivalSample::SurvivalSample(Eigen::VectorXd y, std::vector<int> delta,
                               Eigen::MatrixXd x)
    : y_(std::move(y)), delta_(std::move(delta)), x_(std::move(x)) {
  const auto n = static_cast<std::size_t>(y_.size());
  if (delta_.size() != n || static_cast<std::size_t>(x_.rows()) != n) {
    throw ValidationError("y, delta and x must have the same number of rows");
  }
  if (x_.cols() < 1) throw ValidationError("at least one covariate is required");
  if (n <= static_cast<std::size_t>(x_.cols())) {
    throw ValidationError("n must exceed p (n = " + std::to_string(n) +
                          ", p = " + std::to_string(x_.cols()) + ")");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (delta_[i] != 0 && delta_[i] != 1) {
      throw ValidationError("delta must be 0 or 1 (row " + std::to_string(i + 1) + ")");
    }
    if (!std::isfinite(y_[i]) || !x_.row(i).allFinite()) {
      throw ValidationError("non-finite entry in row " + std::to_string(i + 1));
    }
  }
}

std::size_t SurvivalSample::uncensored_count() const noexcept {
  return static_cast<std::size_t>(std::count(delta_.begin(), delta_.end(), 1));
}

bool operator==(const SurvivalSample& a, const SurvivalSample& b) {
  return a.y_.size() == b.y_.size() && a.x_.cols() == b.x_.cols() &&
         a.y_ == b.y_ && a.delta_ == b.delta_ && a.x_ == b.x_;
}

SurvivalSample SortedSample::unsorted() const {
  const std::size_t n = base_.n();
  Eigen::VectorXd y(n);
  std::vector<int> delta(n);
  Eigen::MatrixXd x(n, base_.p());
  for (std::size_t i = 0; i < n; ++i) {
    const auto k = perm_[i];
    y[k] = base_.y()[i];
    delta[k] = base_.delta()[i];
    x.row(k) = base_.x().row(i);
  }
  return {std::move(y), std::move(delta), std::move(x)};
}

SortedSample sort_sample(const SurvivalSample& s) {
  const std::size_t n = s.n();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  const auto& y = s.y();
  const auto& d = s.delta();
  std::stable_sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) {
    if (y[a] != y[b]) return y[a] < y[b];
    return d[a] > d[b];
  });

  Eigen::VectorXd ys(n);
  std::vector<int> ds(n);
  Eigen::MatrixXd xs(n, s.p());
  for (std::size_t i = 0; i < n; ++i) {
    ys[i] = y[perm[i]];
    ds[i] = d[perm[i]];
    xs.row(i) = s.x().row(perm[i]);
  }
  return SortedSample(SurvivalSample(std::move(ys), std::move(ds), std::move(xs)),
                      std::move(perm));
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    out.push_back(trim(line.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_number(std::string_view field, std::size_t row, std::size_t col) {
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  double v = 0.0;
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, v);
  if (field.empty() || ec != std::errc() || ptr != end) {
    throw ParseError(row, col, "cannot parse '" + std::string(field) + "' as a number");
  }
  if (!std::isfinite(v)) throw ParseError(row, col, "non-finite value");
  return v;
}

}  // namespace

SurvivalSample parse_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError(0, 1, "missing header");
  const auto header = split(line);
  if (header.size() < 3 || header[0] != "y" || header[1] != "delta") {
    throw ParseError(0, 1, "header must be y,delta,x1,...,xp");
  }
  for (std::size_t k = 2; k < header.size(); ++k) {
    if (header[k] != "x" + std::to_string(k - 1)) {
      throw ParseError(0, k + 1, "expected column name x" + std::to_string(k - 1));
    }
  }
  const std::size_t p = header.size() - 2;

  std::vector<double> ys;
  std::vector<int> ds;
  std::vector<double> xs;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    ++row;
    const auto fields = split(line);
    if (fields.size() != p + 2) {
      throw ParseError(row, std::min(fields.size(), p + 2) + 1,
                       "expected " + std::to_string(p + 2) + " fields, found " +
                           std::to_string(fields.size()));
    }
    ys.push_back(parse_number(fields[0], row, 1));
    const double d = parse_number(fields[1], row, 2);
    if (d != 0.0 && d != 1.0) throw ParseError(row, 2, "delta must be 0 or 1");
    ds.push_back(static_cast<int>(d));
    for (std::size_t k = 0; k < p; ++k) xs.push_back(parse_number(fields[k + 2], row, k + 3));
  }

  const std::size_t n = ys.size();
  if (n <= p) {
    throw ValidationError("n must exceed p (n = " + std::to_string(n) +
                          ", p = " + std::to_string(p) + ")");
  }
  Eigen::MatrixXd x = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                                     Eigen::RowMajor>>(xs.data(), n, p);
  return {Eigen::Map<const Eigen::VectorXd>(ys.data(), n), std::move(ds), std::move(x)};
}

SurvivalSample load_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path.string());
  return parse_csv(in);
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

void write_csv(std::ostream& out, const SurvivalSample& s) {
  out << "y,delta";
  for (std::size_t k = 1; k <= s.p(); ++k) out << ",x" << k;
  out << '\n';
  for (std::size_t i = 0; i < s.n(); ++i) {
    out << format_double(s.y()[i]) << ',' << s.delta()[i];
    for (std::size_t k = 0; k < s.p(); ++k) out << ',' << format_double(s.x()(i, k));
    out << '\n';
  }
}

void write_csv(const std::filesystem::path& path, const SurvivalSample& s) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path.string());
  write_csv(out, s);
}

}  // namespace censreg
