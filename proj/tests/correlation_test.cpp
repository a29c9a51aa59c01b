#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "indep/correlation.hpp"
#include "indep/error.hpp"
#include "indep/ks.hpp"
#include "indep/random.hpp"

using namespace indep;

namespace {

// Rows are observations.
DataMatrix from_columns(const std::vector<std::vector<double>>& columns) {
  const std::size_t p = columns.size();
  const std::size_t n = columns.front().size();
  std::vector<double> values(n * p);
  for (std::size_t j = 0; j < p; ++j) {
    for (std::size_t k = 0; k < n; ++k) values[k * p + j] = columns[j][k];
  }
  return DataMatrix(n, p, std::move(values));
}

DataMatrix noise(std::size_t n, std::size_t p, RandomStream& rng) {
  std::vector<double> values(n * p);
  for (double& v : values) v = rng.normal();
  return DataMatrix(n, p, std::move(values));
}

struct MomentAccumulator {
  double sum = 0, sum_sq = 0;
  std::uint64_t count = 0;
  void add(double x) {
    sum += x;
    sum_sq += x * x;
    ++count;
  }
  double mean() const { return sum / count; }
  double standard_error() const {
    const double m = mean();
    return std::sqrt((sum_sq / count - m * m) / count);
  }
};

}  // namespace

TEST(DataMatrix, Validation) {
  EXPECT_THROW(DataMatrix(2, 2, {1, 2, 3, 4}), SampleSizeError);
  EXPECT_THROW(DataMatrix(3, 1, {1, 2, 3}), DomainError);
  EXPECT_THROW(DataMatrix(3, 2, {1, 2, 3}), DomainError);
  EXPECT_THROW(DataMatrix(3, 2, {1, 2, 3, 4, 5, NAN}), DomainError);
}

TEST(CorrelationSummary, OrderingAndLookup) {
  EXPECT_EQ(pair_count(4), 6u);
  EXPECT_EQ(pair_index(1, 0), 0u);
  EXPECT_EQ(pair_index(2, 0), 1u);
  EXPECT_EQ(pair_index(2, 1), 2u);
  EXPECT_EQ(pair_index(3, 0), 3u);
  CorrelationSummary s(10, 3, {0.1, 0.2, 0.3});
  EXPECT_EQ(s.at(0, 1), 0.1);
  EXPECT_EQ(s.at(2, 0), 0.2);
  EXPECT_EQ(s.at(1, 2), 0.3);
  EXPECT_EQ(s.at(2, 2), 1.0);
  EXPECT_THROW(CorrelationSummary(10, 3, {0.1, 0.2}), DomainError);
  EXPECT_THROW(CorrelationSummary(10, 2, {1.5}), DomainError);
}

TEST(CorrelationSummaryOf, IdenticalColumnsGiveOne) {
  const auto s = correlation_summary(from_columns({{1, 2, 3}, {1, 2, 3}}));
  EXPECT_EQ(s.offdiag()[0], 1.0);
}

TEST(CorrelationSummaryOf, HandExample) {
  const auto s = correlation_summary(from_columns({{1, 2, 3}, {1, 3, 2}}));
  EXPECT_NEAR(s.offdiag()[0], 0.5, 1e-15);
}

TEST(CorrelationSummaryOf, ReversedColumnGivesMinusOne) {
  const auto s = correlation_summary(from_columns({{1, 2, 3, 4}, {8, 6, 4, 2}}));
  EXPECT_EQ(s.offdiag()[0], -1.0);
}

TEST(CorrelationSummaryOf, ConstantColumnIsNamed) {
  try {
    correlation_summary(from_columns({{1, 2, 3}, {4, 5, 6}, {7, 7, 7}}));
    FAIL() << "expected DegenerateColumnError";
  } catch (const DegenerateColumnError& e) {
    EXPECT_EQ(e.column(), 2u);
    EXPECT_NE(std::string(e.what()).find("column 3"), std::string::npos);
  }
}

TEST(CorrelationSummaryOf, LocationScaleInvariance) {
  RandomStream rng(3);
  const DataMatrix base = noise(25, 6, rng);
  std::vector<double> moved(base.values().begin(), base.values().end());
  for (std::size_t k = 0; k < moved.size(); ++k) {
    const std::size_t j = k % 6;
    moved[k] = 1e6 + 1000.0 * j + (0.5 + j) * moved[k];
  }
  const auto a = correlation_summary(base);
  const auto b = correlation_summary(DataMatrix(25, 6, std::move(moved)));
  for (std::size_t k = 0; k < a.offdiag().size(); ++k) {
    EXPECT_NEAR(a.offdiag()[k], b.offdiag()[k], 1e-9);
  }
}

TEST(CorrelationSummaryOf, PermutationEquivariance) {
  RandomStream rng(4);
  const std::size_t n = 12, p = 5;
  const DataMatrix base = noise(n, p, rng);
  const std::vector<std::size_t> perm = {3, 0, 4, 1, 2};
  std::vector<double> shuffled(n * p);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = 0; j < p; ++j) shuffled[k * p + j] = base(k, perm[j]);
  }
  const auto a = correlation_summary(base);
  const auto b = correlation_summary(DataMatrix(n, p, std::move(shuffled)));
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < p; ++j) {
      EXPECT_NEAR(b.at(i, j), a.at(perm[i], perm[j]), 1e-14);
    }
  }
}

TEST(CorrelationSummaryOf, EntriesBounded) {
  RandomStream rng(5);
  for (int rep = 0; rep < 50; ++rep) {
    const auto s = correlation_summary(noise(4, 30, rng));
    for (double r : s.offdiag()) {
      EXPECT_GE(r, -1.0);
      EXPECT_LE(r, 1.0);
    }
  }
}

TEST(SphereSampler, UnitNorm) {
  RandomStream rng(6);
  for (std::size_t dim : {1u, 2u, 9u, 199u, 5000u}) {
    for (int rep = 0; rep < 20; ++rep) {
      const auto w = sample_unit_sphere(dim, rng);
      const double norm2 = std::inner_product(w.begin(), w.end(), w.begin(), 0.0);
      EXPECT_NEAR(std::sqrt(norm2), 1.0, 1e-12);
    }
  }
  EXPECT_THROW(sample_unit_sphere(0, rng), DomainError);
}

TEST(SphereSampler, Deterministic) {
  RandomStream a(77), b(77);
  const auto x = sample_null_correlations(10, 6, a);
  const auto y = sample_null_correlations(10, 6, b);
  ASSERT_EQ(x.offdiag().size(), 15u);
  for (std::size_t k = 0; k < 15; ++k) EXPECT_EQ(x.offdiag()[k], y.offdiag()[k]);
}

TEST(SphereSampler, MeanSquareIsOneOverNMinusOne) {
  RandomStream rng(8);
  MomentAccumulator acc;
  for (int rep = 0; rep < 100000; ++rep) {
    acc.add(std::pow(sample_null_correlations(10, 2, rng).offdiag()[0], 2));
  }
  EXPECT_NEAR(acc.mean(), 1.0 / 9.0, 3.0 * acc.standard_error());
}

TEST(SphereSampler, MatchesDataPathInDistribution) {
  constexpr int kReps = 10000;
  RandomStream sphere_rng(9), data_rng(10);
  std::vector<double> from_sphere(kReps), from_data(kReps);
  for (int rep = 0; rep < kReps; ++rep) {
    from_sphere[rep] = sample_null_correlations(10, 2, sphere_rng).offdiag()[0];
    from_data[rep] = correlation_summary(noise(10, 2, data_rng)).offdiag()[0];
  }
  EXPECT_LT(ks_distance(from_sphere, from_data), 0.02);
}

TEST(SphereSampler, FirstTwoMomentsOfSquareMatchDataPath) {
  for (std::size_t n : {10u, 30u}) {
    RandomStream sphere_rng(100 + n), data_rng(200 + n);
    MomentAccumulator s1, s2, d1, d2;
    for (int rep = 0; rep < 20000; ++rep) {
      const double rs = sample_null_correlations(n, 2, sphere_rng).offdiag()[0];
      const double rd = correlation_summary(noise(n, 2, data_rng)).offdiag()[0];
      s1.add(rs * rs);
      s2.add(std::pow(rs, 4));
      d1.add(rd * rd);
      d2.add(std::pow(rd, 4));
    }
    const auto within = [](const MomentAccumulator& a, const MomentAccumulator& b) {
      const double se = std::hypot(a.standard_error(), b.standard_error());
      return std::abs(a.mean() - b.mean()) <= 3.0 * se;
    };
    EXPECT_TRUE(within(s1, d1)) << "n=" << n << " " << s1.mean() << " vs " << d1.mean();
    EXPECT_TRUE(within(s2, d2)) << "n=" << n << " " << s2.mean() << " vs " << d2.mean();
  }
}

TEST(SphereSampler, RejectsTinyInputs) {
  RandomStream rng(1);
  EXPECT_THROW(sample_null_correlations(2, 3, rng), SampleSizeError);
  EXPECT_THROW(sample_null_correlations(5, 1, rng), DomainError);
}
