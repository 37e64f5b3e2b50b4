#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace censreg {

/// Observed right-censored sample: outcome y (log-duration scale), censoring
/// indicator delta (1 = uncensored) and an n x p covariate matrix. No
/// intercept is added; supply a column of ones if one is wanted.
///
/// Validated on construction and immutable afterwards.
class SurvivalSample {
 public:
  SurvivalSample(Eigen::VectorXd y, std::vector<int> delta, Eigen::MatrixXd x);

  const Eigen::VectorXd& y() const noexcept { return y_; }
  const std::vector<int>& delta() const noexcept { return delta_; }
  const Eigen::MatrixXd& x() const noexcept { return x_; }

  std::size_t n() const noexcept { return static_cast<std::size_t>(y_.size()); }
  std::size_t p() const noexcept { return static_cast<std::size_t>(x_.cols()); }

  std::size_t uncensored_count() const noexcept;

  friend bool operator==(const SurvivalSample& a, const SurvivalSample& b);

 private:
  Eigen::VectorXd y_;
  std::vector<int> delta_;
  Eigen::MatrixXd x_;
};

/// Sample reordered by ascending y, uncensored before censored within ties.
/// perm()[i] is the original row index of sorted row i.
class SortedSample {
 public:
  const SurvivalSample& base() const noexcept { return base_; }
  const std::vector<std::size_t>& perm() const noexcept { return perm_; }

  std::size_t n() const noexcept { return base_.n(); }
  std::size_t p() const noexcept { return base_.p(); }

  /// Inverse of the sorting permutation: the original sample.
  SurvivalSample unsorted() const;

 private:
  SortedSample(SurvivalSample base, std::vector<std::size_t> perm)
      : base_(std::move(base)), perm_(std::move(perm)) {}

  friend SortedSample sort_sample(const SurvivalSample& s);

  SurvivalSample base_;
  std::vector<std::size_t> perm_;
};

SortedSample sort_sample(const SurvivalSample& s);

/// Reads "y,delta,x1,...,xp" CSV. Throws ParseError (with row/column) or
/// ValidationError.
SurvivalSample load_csv(const std::filesystem::path& path);
SurvivalSample parse_csv(std::istream& in);

/// Writes the same format with shortest round-trip decimals.
void write_csv(std::ostream& out, const SurvivalSample& s);
void write_csv(const std::filesystem::path& path, const SurvivalSample& s);

/// Shortest decimal text that parses back to exactly `v`.
std::string format_double(double v);

}  // namespace censreg
