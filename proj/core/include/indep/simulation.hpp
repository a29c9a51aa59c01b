#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "indep/correlation.hpp"
#include "indep/decision.hpp"
#include "indep/random.hpp"

namespace indep {

/// One Monte Carlo cell: data are n draws from N_p(0, Sigma) where Sigma has
/// unit diagonal and constant off-diagonal rho.
struct SimulationSpec {
  std::size_t n = 0;
  std::size_t p = 0;
  double rho = 0.0;
  double alpha = 0.05;
  std::uint64_t replications = 10000;
  std::uint64_t seed = 0;
  std::vector<TestKind> tests{kAllTests.begin(), kAllTests.end()};

  /// Throws DomainError / SampleSizeError when the cell is not runnable:
  /// rho outside (-1/(p-1), 1), alpha outside (0, 1), zero replications,
  /// n < 3, p < 2 or an empty test list.
  void validate() const;
};

struct TestOutcome {
  TestKind test = TestKind::t_star;
  std::uint64_t rejection_count = 0;
  /// Replications whose statistic could not be formed (degenerate sample).
  std::uint64_t error_count = 0;
  /// rejection_count / (replications - error_count).
  double rejection_rate = 0.0;
  /// sqrt(rate (1 - rate) / (replications - error_count)).
  double mc_standard_error = 0.0;
};

struct SimulationResult {
  std::vector<TestOutcome> outcomes;
  /// Throws DomainError if `test` was not simulated.
  const TestOutcome& at(TestKind test) const;
};

struct RunOptions {
  /// Worker threads; 0 means one per hardware thread.
  unsigned threads = 1;
};

/// Rows i.i.d. N_p(0, Sigma_rho). rho >= 0 uses the one-factor form
/// sqrt(rho) g0 + sqrt(1-rho) g_j; rho < 0 a Cholesky factor of Sigma.
/// Throws DomainError unless -1/(p-1) < rho < 1.
DataMatrix sample_equicorrelated_normal(std::size_t n, std::size_t p, double rho,
                                        RandomStream& rng);

/// Runs `spec.replications` independent replications. Replication i draws from
/// RandomStream::substream(spec.seed, i), so counts do not depend on the
/// number of threads or their scheduling.
///
/// A test whose threshold cannot be formed (e.g. a Mao test with n < 7)
/// throws SampleSizeError before any replication runs.
SimulationResult estimate_rejection_rate(const SimulationSpec& spec, const RunOptions& options = {});

/// Raw statistics from each replication of a cell, in replication order.
/// T is NaN for replications where it is undefined.
struct StatisticDraws {
  std::vector<double> t;
  std::vector<double> T;
};

StatisticDraws sample_statistics(const SimulationSpec& spec, const RunOptions& options = {});

/// One output row of a table run: a (cell, test) pair.
struct TableRow {
  SimulationSpec cell;
  TestKind test = TestKind::t_star;
  std::optional<TestOutcome> outcome;
  /// Set when the cell (or this test within it) failed.
  std::string error;
};

struct TableOptions {
  unsigned threads = 1;
  /// Cells for which this returns true are skipped (resume support).
  std::function<bool(const SimulationSpec&)> already_done;
  /// Called after each cell with its index in the grid and its rows.
  std::function<void(std::size_t, const SimulationSpec&, const std::vector<TableRow>&)> on_cell;
};

/// Evaluates every cell of `grid`; per-cell failures become rows carrying an
/// error message and the run continues. Throws DomainError on an empty grid.
std::vector<TableRow> run_table(const std::vector<SimulationSpec>& grid,
                                const TableOptions& options = {});

/// Sample sizes and dimensions of the standard size/power grid.
inline constexpr std::size_t kTableSampleSizes[] = {15, 30, 60, 100, 200};
inline constexpr std::size_t kTableDimensions[] = {3, 10, 20, 50, 100, 200};

/// The 30-cell grid (n outer, p inner) at the given rho, with all four tests.
std::vector<SimulationSpec> table_grid(double rho, double alpha, std::uint64_t replications,
                                       std::uint64_t seed);

}  // namespace indep
