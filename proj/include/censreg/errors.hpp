#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace censreg {

/// Invalid sample contents or arguments.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// CSV parse failure. Rows are 1-based data rows (the header is row 0),
/// columns are 1-based.
class ParseError : public ValidationError {
 public:
  ParseError(std::size_t row, std::size_t column, const std::string& what)
      : ValidationError("row " + std::to_string(row) + ", column " +
                        std::to_string(column) + ": " + what),
        row_(row),
        column_(column) {}

  std::size_t row() const noexcept { return row_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t row_;
  std::size_t column_;
};

/// The weighted Gram matrix is numerically singular (collinear covariates
/// after weighting, or too few rows with positive weight).
class SingularGramError : public std::runtime_error {
 public:
  SingularGramError(const std::string& what, double min_eigen, double max_eigen)
      : std::runtime_error(what), min_eigen_(min_eigen), max_eigen_(max_eigen) {}

  double min_eigenvalue() const noexcept { return min_eigen_; }
  double max_eigenvalue() const noexcept { return max_eigen_; }

 private:
  double min_eigen_;
  double max_eigen_;
};

}  // namespace censreg
