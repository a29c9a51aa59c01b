#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "indep/random.hpp"

namespace indep {

/// n x p observation matrix: rows are observations, columns are variables.
/// Stored row-major.
class DataMatrix {
 public:
  /// Throws SampleSizeError if n < 3, DomainError if p < 2, the value count
  /// does not match, or any value is not finite.
  DataMatrix(std::size_t n, std::size_t p, std::vector<double> values);

  std::size_t n() const noexcept { return n_; }
  std::size_t p() const noexcept { return p_; }
  double operator()(std::size_t row, std::size_t col) const { return values_[row * p_ + col]; }
  std::span<const double> values() const noexcept { return values_; }

 private:
  std::size_t n_;
  std::size_t p_;
  std::vector<double> values_;
};

/// Number of index pairs j < i among p variables, p(p-1)/2.
constexpr std::size_t pair_count(std::size_t p) noexcept { return p * (p - 1) / 2; }

/// Position of r_ij (0-based, j < i) in the off-diagonal vector.
/// Order is (1,0), (2,0), (2,1), (3,0), ...: i outer, j inner.
constexpr std::size_t pair_index(std::size_t i, std::size_t j) noexcept {
  return i * (i - 1) / 2 + j;
}

/// Off-diagonal sample correlations r_ij, j < i, in pair_index order.
class CorrelationSummary {
 public:
  /// Throws DomainError on a length mismatch or an entry outside [-1, 1].
  CorrelationSummary(std::size_t n, std::size_t p, std::vector<double> offdiag);

  std::size_t n() const noexcept { return n_; }
  std::size_t p() const noexcept { return p_; }
  std::span<const double> offdiag() const noexcept { return offdiag_; }
  /// r_ij for i != j (either order); r_ii = 1.
  double at(std::size_t i, std::size_t j) const;

 private:
  std::size_t n_;
  std::size_t p_;
  std::vector<double> offdiag_;
};

/// Pearson correlations of every pair of columns, computed in two passes
/// (column means, then centered cross products).
///
/// Throws DegenerateColumnError naming the first constant column.
CorrelationSummary correlation_summary(const DataMatrix& data);

/// A point uniform on the unit sphere in R^dim (normalized standard normals).
/// Throws DomainError if dim == 0.
std::vector<double> sample_unit_sphere(std::size_t dim, RandomStream& rng);

/// Null-distribution draw without data: p independent vectors uniform on the
/// unit sphere in R^(n-1), returning all pairwise inner products. Has the same
/// law as correlation_summary of an n x p matrix of i.i.d. normals.
CorrelationSummary sample_null_correlations(std::size_t n, std::size_t p, RandomStream& rng);

}  // namespace indep
