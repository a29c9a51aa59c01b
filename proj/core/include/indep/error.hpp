#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace indep {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the mathematical domain of an operation
/// (probability outside (0,1), non-positive degrees of freedom, rho outside
/// the positive-definite range, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The sample size is too small for the requested statistic.
class SampleSizeError : public Error {
 public:
  using Error::Error;
};

/// A data column has zero sample variance, so its correlations are undefined.
class DegenerateColumnError : public Error {
 public:
  DegenerateColumnError(std::size_t column, const std::string& what)
      : Error(what), column_(column) {}
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t column_;
};

/// Some |r_ij| equals one, so r^2/(1-r^2) or atanh(r) is infinite.
class DegenerateCorrelationError : public Error {
 public:
  using Error::Error;
};

/// Malformed input text. Row and column are 1-based; 0 means "not applicable".
class ParseError : public Error {
 public:
  ParseError(std::size_t row, std::size_t column, const std::string& what)
      : Error(what), row_(row), column_(column) {}
  std::size_t row() const noexcept { return row_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t row_;
  std::size_t column_;
};

}  // namespace indep
