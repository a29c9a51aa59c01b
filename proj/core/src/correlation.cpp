#include "indep/correlation.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "indep/error.hpp"

namespace indep {

namespace {

using ColMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor>;
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Rounding in the inner products can leave exactly collinear columns a few
// ulp short of +-1; such values are snapped so degeneracy is detectable.
constexpr double kSnapToUnit = 8.0 * std::numeric_limits<double>::epsilon();

double clamp_correlation(double r) {
  if (r >= 1.0 - kSnapToUnit) return 1.0;
  if (r <= -1.0 + kSnapToUnit) return -1.0;
  return r;
}

// Columns of `unit` must have unit Euclidean norm.
std::vector<double> pairwise_inner_products(const ColMatrix& unit) {
  const Eigen::Index p = unit.cols();
  ColMatrix gram = ColMatrix::Zero(p, p);
  gram.selfadjointView<Eigen::Lower>().rankUpdate(unit.transpose());
  std::vector<double> offdiag;
  offdiag.reserve(pair_count(static_cast<std::size_t>(p)));
  for (Eigen::Index i = 1; i < p; ++i) {
    for (Eigen::Index j = 0; j < i; ++j) {
      offdiag.push_back(clamp_correlation(gram(i, j)));
    }
  }
  return offdiag;
}

void fill_unit_sphere(double* out, Eigen::Index dim, RandomStream& rng) {
  Eigen::Map<Eigen::VectorXd> w(out, dim);
  for (Eigen::Index k = 0; k < dim; ++k) w[k] = rng.normal();
  w.normalize();
}

}  // namespace

DataMatrix::DataMatrix(std::size_t n, std::size_t p, std::vector<double> values)
    : n_(n), p_(p), values_(std::move(values)) {
  if (n < 3) {
    throw SampleSizeError("need at least 3 observations, got " + std::to_string(n));
  }
  if (p < 2) {
    throw DomainError("need at least 2 variables, got " + std::to_string(p));
  }
  if (values_.size() != n * p) {
    throw DomainError("data matrix expects " + std::to_string(n * p) + " values, got " +
                      std::to_string(values_.size()));
  }
  for (std::size_t k = 0; k < values_.size(); ++k) {
    if (!std::isfinite(values_[k])) {
      throw DomainError("non-finite value at row " + std::to_string(k / p + 1) + ", column " +
                        std::to_string(k % p + 1));
    }
  }
}

CorrelationSummary::CorrelationSummary(std::size_t n, std::size_t p, std::vector<double> offdiag)
    : n_(n), p_(p), offdiag_(std::move(offdiag)) {
  if (offdiag_.size() != pair_count(p)) {
    throw DomainError("correlation summary for p=" + std::to_string(p) + " needs " +
                      std::to_string(pair_count(p)) + " entries, got " +
                      std::to_string(offdiag_.size()));
  }
  for (double r : offdiag_) {
    if (!(r >= -1.0 && r <= 1.0)) {
      throw DomainError("correlation outside [-1, 1]: " + std::to_string(r));
    }
  }
}

double CorrelationSummary::at(std::size_t i, std::size_t j) const {
  if (i == j) return 1.0;
  if (i < j) std::swap(i, j);
  return offdiag_.at(pair_index(i, j));
}

CorrelationSummary correlation_summary(const DataMatrix& data) {
  const auto n = static_cast<Eigen::Index>(data.n());
  const auto p = static_cast<Eigen::Index>(data.p());
  Eigen::Map<const RowMatrix> raw(data.values().data(), n, p);

  for (Eigen::Index j = 0; j < p; ++j) {
    if (raw.col(j).minCoeff() == raw.col(j).maxCoeff()) {
      throw DegenerateColumnError(static_cast<std::size_t>(j),
                                  "column " + std::to_string(j + 1) +
                                      " has zero sample variance; its correlations are undefined");
    }
  }

  ColMatrix centered = raw;
  centered.rowwise() -= centered.colwise().mean();
  for (Eigen::Index j = 0; j < p; ++j) {
    const double norm = centered.col(j).norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) {
      throw DegenerateColumnError(static_cast<std::size_t>(j),
                                  "column " + std::to_string(j + 1) +
                                      " has zero or non-finite centered norm");
    }
    centered.col(j) /= norm;
  }
  return CorrelationSummary(data.n(), data.p(), pairwise_inner_products(centered));
}

std::vector<double> sample_unit_sphere(std::size_t dim, RandomStream& rng) {
  if (dim == 0) throw DomainError("sphere dimension must be positive");
  std::vector<double> w(dim);
  fill_unit_sphere(w.data(), static_cast<Eigen::Index>(dim), rng);
  return w;
}

CorrelationSummary sample_null_correlations(std::size_t n, std::size_t p, RandomStream& rng) {
  if (n < 3) throw SampleSizeError("need n >= 3, got " + std::to_string(n));
  if (p < 2) throw DomainError("need p >= 2, got " + std::to_string(p));
  const auto dim = static_cast<Eigen::Index>(n - 1);
  const auto cols = static_cast<Eigen::Index>(p);
  ColMatrix sphere(dim, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    fill_unit_sphere(sphere.col(j).data(), dim, rng);
  }
  return CorrelationSummary(n, p, pairwise_inner_products(sphere));
}

}  // namespace indep
