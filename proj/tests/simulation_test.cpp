#include <gtest/gtest.h>

#include <cmath>

#include "indep/correlation.hpp"
#include "indep/error.hpp"
#include "indep/simulation.hpp"
#include "indep/statistics.hpp"

using namespace indep;

namespace {

SimulationSpec cell(std::size_t n, std::size_t p, double rho, std::uint64_t reps,
                    std::uint64_t seed = 17) {
  SimulationSpec spec;
  spec.n = n;
  spec.p = p;
  spec.rho = rho;
  spec.replications = reps;
  spec.seed = seed;
  return spec;
}

bool same_counts(const SimulationResult& a, const SimulationResult& b) {
  if (a.outcomes.size() != b.outcomes.size()) return false;
  for (std::size_t i = 0; i < a.outcomes.size(); ++i) {
    if (a.outcomes[i].test != b.outcomes[i].test ||
        a.outcomes[i].rejection_count != b.outcomes[i].rejection_count ||
        a.outcomes[i].error_count != b.outcomes[i].error_count) {
      return false;
    }
  }
  return true;
}

}  // namespace

TEST(EquicorrelatedNormal, RejectsNonPositiveDefiniteRho) {
  RandomStream rng(1);
  EXPECT_THROW(sample_equicorrelated_normal(10, 5, 1.0, rng), DomainError);
  EXPECT_THROW(sample_equicorrelated_normal(10, 5, -0.25, rng), DomainError);
  EXPECT_THROW(sample_equicorrelated_normal(10, 5, NAN, rng), DomainError);
  EXPECT_NO_THROW(sample_equicorrelated_normal(10, 5, -0.24, rng));
}

TEST(EquicorrelatedNormal, Deterministic) {
  RandomStream a(5), b(5);
  const auto x = sample_equicorrelated_normal(20, 4, 0.3, a);
  const auto y = sample_equicorrelated_normal(20, 4, 0.3, b);
  ASSERT_EQ(x.values().size(), y.values().size());
  for (std::size_t k = 0; k < x.values().size(); ++k) EXPECT_EQ(x.values()[k], y.values()[k]);
}

TEST(EquicorrelatedNormal, IndependentColumnsUnderNull) {
  RandomStream rng(2);
  double sum = 0;
  constexpr int kReps = 20000;
  for (int rep = 0; rep < kReps; ++rep) {
    const auto s = correlation_summary(sample_equicorrelated_normal(12, 2, 0.0, rng));
    sum += s.offdiag()[0] * s.offdiag()[0];
  }
  // Var(r^2) ~ 2/n^2 at n = 12, so the SE of the mean is ~1e-3.
  EXPECT_NEAR(sum / kReps, 1.0 / 11.0, 4e-3);
}

TEST(EquicorrelatedNormal, CorrelationsConcentrateAtRho) {
  for (double rho : {0.5, -0.2}) {
    RandomStream rng(3);
    const auto s = correlation_summary(sample_equicorrelated_normal(20000, 4, rho, rng));
    for (double r : s.offdiag()) EXPECT_NEAR(r, rho, 0.03) << rho;
  }
}

TEST(SimulationSpec, Validation) {
  EXPECT_NO_THROW(cell(15, 3, 0.0, 10).validate());
  EXPECT_THROW(cell(2, 3, 0.0, 10).validate(), SampleSizeError);
  EXPECT_THROW(cell(15, 1, 0.0, 10).validate(), DomainError);
  EXPECT_THROW(cell(15, 3, -0.5, 10).validate(), DomainError);
  EXPECT_THROW(cell(15, 3, 0.0, 0).validate(), DomainError);
  auto spec = cell(15, 3, 0.0, 10);
  spec.alpha = 1.0;
  EXPECT_THROW(spec.validate(), DomainError);
  spec.alpha = 0.05;
  spec.tests.clear();
  EXPECT_THROW(spec.validate(), DomainError);
}

TEST(EstimateRejectionRate, ReproducibleWithSameSeed) {
  const auto spec = cell(15, 10, 0.0, 500);
  EXPECT_TRUE(same_counts(estimate_rejection_rate(spec), estimate_rejection_rate(spec)));
}

TEST(EstimateRejectionRate, IndependentOfThreadCount) {
  const auto spec = cell(20, 8, 0.1, 700, 99);
  const auto serial = estimate_rejection_rate(spec, {1});
  for (unsigned threads : {2u, 3u, 8u}) {
    EXPECT_TRUE(same_counts(serial, estimate_rejection_rate(spec, {threads}))) << threads;
  }
}

TEST(EstimateRejectionRate, SeedChangesDraws) {
  const auto a = sample_statistics(cell(15, 5, 0.0, 50, 1));
  const auto b = sample_statistics(cell(15, 5, 0.0, 50, 2));
  EXPECT_NE(a.t, b.t);
}

TEST(EstimateRejectionRate, RateAndStandardError) {
  const auto result = estimate_rejection_rate(cell(30, 10, 0.0, 2000));
  ASSERT_EQ(result.outcomes.size(), 4u);
  for (const auto& o : result.outcomes) {
    EXPECT_EQ(o.error_count, 0u);
    EXPECT_DOUBLE_EQ(o.rejection_rate, o.rejection_count / 2000.0);
    EXPECT_DOUBLE_EQ(o.mc_standard_error,
                     std::sqrt(o.rejection_rate * (1 - o.rejection_rate) / 2000.0));
    EXPECT_GT(o.rejection_rate, 0.02);
    EXPECT_LT(o.rejection_rate, 0.09);
  }
}

TEST(EstimateRejectionRate, SubsetOfTests) {
  auto spec = cell(30, 10, 0.0, 100);
  spec.tests = {TestKind::T_c};
  const auto result = estimate_rejection_rate(spec);
  ASSERT_EQ(result.outcomes.size(), 1u);
  EXPECT_NO_THROW(result.at(TestKind::T_c));
  EXPECT_THROW(result.at(TestKind::t_star), DomainError);
}

TEST(EstimateRejectionRate, MaoTestNeedsSevenObservations) {
  auto spec = cell(6, 3, 0.0, 10);
  spec.tests = {TestKind::T_star};
  EXPECT_THROW(estimate_rejection_rate(spec), SampleSizeError);
}

TEST(EstimateRejectionRate, PowerGrowsWithCorrelation) {
  const auto null = estimate_rejection_rate(cell(60, 20, 0.0, 1000));
  const auto alt = estimate_rejection_rate(cell(60, 20, 0.1, 1000));
  for (TestKind k : kAllTests) {
    EXPECT_GT(alt.at(k).rejection_rate, null.at(k).rejection_rate + 0.2) << test_name(k);
  }
}

TEST(SampleStatistics, MatchesDirectComputation) {
  const auto spec = cell(12, 4, 0.0, 5, 31);
  const auto draws = sample_statistics(spec);
  ASSERT_EQ(draws.t.size(), 5u);
  for (std::uint64_t i = 0; i < 5; ++i) {
    RandomStream rng = RandomStream::substream(31, i);
    const auto s = correlation_summary(sample_equicorrelated_normal(12, 4, 0.0, rng));
    EXPECT_EQ(draws.t[i], schott_t(s));
    EXPECT_EQ(draws.T[i], mao_T(s));
  }
}

TEST(RunTable, StandardGridShape) {
  const auto grid = table_grid(0.0, 0.05, 10, 1);
  ASSERT_EQ(grid.size(), 30u);
  EXPECT_EQ(grid.front().n, 15u);
  EXPECT_EQ(grid.front().p, 3u);
  EXPECT_EQ(grid.back().n, 200u);
  EXPECT_EQ(grid.back().p, 200u);
  for (const auto& spec : grid) EXPECT_EQ(spec.tests.size(), 4u);
}

TEST(RunTable, SingleCellAndDuplicates) {
  auto spec = cell(15, 3, 0.0, 200);
  spec.tests = {TestKind::t_star};
  const auto one = run_table({spec});
  ASSERT_EQ(one.size(), 1u);
  ASSERT_TRUE(one[0].outcome);
  const auto twice = run_table({spec, spec});
  ASSERT_EQ(twice.size(), 2u);
  EXPECT_EQ(twice[0].outcome->rejection_count, twice[1].outcome->rejection_count);
  EXPECT_EQ(twice[0].outcome->rejection_count, one[0].outcome->rejection_count);
}

TEST(RunTable, BadCellsAreReportedAndRunContinues) {
  const auto bad_rho = cell(15, 3, 1.0, 50);
  const auto bad = cell(15, 3, -0.6, 50);
  const auto small = cell(5, 3, 0.0, 50);
  const auto good = cell(15, 3, 0.0, 50);
  std::size_t callbacks = 0;
  TableOptions options;
  options.on_cell = [&](std::size_t, const SimulationSpec&, const std::vector<TableRow>&) {
    ++callbacks;
  };
  const auto rows = run_table({bad, small, good, bad_rho}, options);
  EXPECT_EQ(callbacks, 4u);
  ASSERT_EQ(rows.size(), 16u);
  for (int i = 0; i < 4; ++i) {
    EXPECT_FALSE(rows[i].outcome);
    EXPECT_FALSE(rows[i].error.empty());
  }
  // n = 5: Schott tests run, Mao tests report a sample-size error.
  for (int i = 4; i < 8; ++i) {
    EXPECT_EQ(static_cast<bool>(rows[i].outcome), !uses_mao_statistic(rows[i].test));
  }
  for (int i = 8; i < 12; ++i) EXPECT_TRUE(rows[i].outcome);
  for (int i = 12; i < 16; ++i) EXPECT_FALSE(rows[i].outcome);
}

TEST(RunTable, ResumeSkipsFinishedCells) {
  const auto a = cell(15, 3, 0.0, 50);
  const auto b = cell(30, 3, 0.0, 50);
  TableOptions options;
  options.already_done = [](const SimulationSpec& s) { return s.n == 15; };
  const auto rows = run_table({a, b}, options);
  ASSERT_EQ(rows.size(), 4u);
  for (const auto& row : rows) EXPECT_EQ(row.cell.n, 30u);
  EXPECT_THROW(run_table({}), DomainError);
}
