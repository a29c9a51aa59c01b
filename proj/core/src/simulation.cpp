#include "indep/simulation.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <cmath>
#include <limits>

#include "indep/error.hpp"
#include "indep/statistics.hpp"
#include "parallel.hpp"

namespace indep {

namespace {

bool rho_in_pd_range(double rho, std::size_t p) {
  return rho < 1.0 && rho > -1.0 / static_cast<double>(p - 1);
}

struct ReplicationStatistics {
  bool ok = false;
  double t = 0.0;
  std::optional<double> T;
};

ReplicationStatistics run_replication(const SimulationSpec& spec, std::uint64_t index,
                                      bool need_mao) {
  RandomStream rng = RandomStream::substream(spec.seed, index);
  ReplicationStatistics out;
  try {
    const CorrelationSummary corr =
        correlation_summary(sample_equicorrelated_normal(spec.n, spec.p, spec.rho, rng));
    out.t = schott_t(corr);
    out.ok = true;
    if (need_mao) out.T = mao_T(corr);
  } catch (const DegenerateColumnError&) {
  } catch (const DegenerateCorrelationError&) {
  }
  return out;
}

struct Tally {
  std::vector<std::uint64_t> rejections;
  std::vector<std::uint64_t> errors;
};

}  // namespace

void SimulationSpec::validate() const {
  if (n < 3) throw SampleSizeError("n must be at least 3, got " + std::to_string(n));
  if (p < 2) throw DomainError("p must be at least 2, got " + std::to_string(p));
  if (!std::isfinite(rho) || !rho_in_pd_range(rho, p)) {
    throw DomainError("rho=" + std::to_string(rho) + " outside (-1/(p-1), 1) for p=" +
                      std::to_string(p));
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw DomainError("alpha must lie in (0, 1), got " + std::to_string(alpha));
  }
  if (replications == 0) throw DomainError("replications must be positive");
  if (tests.empty()) throw DomainError("no tests requested");
}

const TestOutcome& SimulationResult::at(TestKind test) const {
  for (const TestOutcome& outcome : outcomes) {
    if (outcome.test == test) return outcome;
  }
  throw DomainError("test " + std::string(test_name(test)) + " was not simulated");
}

DataMatrix sample_equicorrelated_normal(std::size_t n, std::size_t p, double rho,
                                        RandomStream& rng) {
  if (p < 2 || !std::isfinite(rho) || !rho_in_pd_range(rho, p)) {
    throw DomainError("rho=" + std::to_string(rho) +
                      " does not give a positive definite equicorrelation matrix for p=" +
                      std::to_string(p));
  }
  std::vector<double> values(n * p);
  if (rho >= 0.0) {
    const double common = std::sqrt(rho);
    const double own = std::sqrt(1.0 - rho);
    for (std::size_t k = 0; k < n; ++k) {
      const double factor = common * rng.normal();
      for (std::size_t j = 0; j < p; ++j) {
        values[k * p + j] = factor + own * rng.normal();
      }
    }
  } else {
    const auto dim = static_cast<Eigen::Index>(p);
    Eigen::MatrixXd sigma = Eigen::MatrixXd::Constant(dim, dim, rho);
    sigma.diagonal().setOnes();
    const Eigen::LLT<Eigen::MatrixXd> llt(sigma);
    if (llt.info() != Eigen::Success) {
      throw DomainError("equicorrelation matrix is not numerically positive definite");
    }
    const Eigen::MatrixXd lower = llt.matrixL();
    Eigen::VectorXd g(dim);
    for (std::size_t k = 0; k < n; ++k) {
      for (Eigen::Index j = 0; j < dim; ++j) g(j) = rng.normal();
      const Eigen::VectorXd row = lower.triangularView<Eigen::Lower>() * g;
      for (Eigen::Index j = 0; j < dim; ++j) values[k * p + static_cast<std::size_t>(j)] = row(j);
    }
  }
  return DataMatrix(n, p, std::move(values));
}

SimulationResult estimate_rejection_rate(const SimulationSpec& spec, const RunOptions& options) {
  spec.validate();
  const Probability alpha(spec.alpha);
  const std::size_t count = spec.tests.size();
  std::vector<double> thresholds(count);
  bool need_mao = false;
  for (std::size_t k = 0; k < count; ++k) {
    thresholds[k] = region_threshold(spec.tests[k], spec.n, spec.p, alpha);
    need_mao = need_mao || uses_mao_statistic(spec.tests[k]);
  }

  auto tallies = detail::for_each_replication<Tally>(
      spec.replications, options.threads,
      [&] { return Tally{std::vector<std::uint64_t>(count), std::vector<std::uint64_t>(count)}; },
      [&](std::uint64_t index, Tally& tally) {
        const ReplicationStatistics stats = run_replication(spec, index, need_mao);
        for (std::size_t k = 0; k < count; ++k) {
          const bool mao = uses_mao_statistic(spec.tests[k]);
          if (!stats.ok || (mao && !stats.T)) {
            ++tally.errors[k];
            continue;
          }
          const double value = mao ? *stats.T : stats.t;
          if (value >= thresholds[k]) ++tally.rejections[k];
        }
      });

  SimulationResult result;
  for (std::size_t k = 0; k < count; ++k) {
    TestOutcome outcome;
    outcome.test = spec.tests[k];
    for (const Tally& tally : tallies) {
      outcome.rejection_count += tally.rejections[k];
      outcome.error_count += tally.errors[k];
    }
    const std::uint64_t valid = spec.replications - outcome.error_count;
    if (valid > 0) {
      const double rate = static_cast<double>(outcome.rejection_count) / static_cast<double>(valid);
      outcome.rejection_rate = rate;
      outcome.mc_standard_error = std::sqrt(rate * (1.0 - rate) / static_cast<double>(valid));
    } else {
      outcome.rejection_rate = std::numeric_limits<double>::quiet_NaN();
      outcome.mc_standard_error = std::numeric_limits<double>::quiet_NaN();
    }
    result.outcomes.push_back(outcome);
  }
  return result;
}

StatisticDraws sample_statistics(const SimulationSpec& spec, const RunOptions& options) {
  spec.validate();
  StatisticDraws draws;
  draws.t.assign(spec.replications, std::numeric_limits<double>::quiet_NaN());
  draws.T.assign(spec.replications, std::numeric_limits<double>::quiet_NaN());
  struct Unused {};
  // Each index writes only its own slot.
  detail::for_each_replication<Unused>(
      spec.replications, options.threads, [] { return Unused{}; },
      [&](std::uint64_t index, Unused&) {
        const ReplicationStatistics stats = run_replication(spec, index, true);
        if (stats.ok) draws.t[index] = stats.t;
        if (stats.T) draws.T[index] = *stats.T;
      });
  return draws;
}

std::vector<TableRow> run_table(const std::vector<SimulationSpec>& grid,
                                const TableOptions& options) {
  if (grid.empty()) throw DomainError("simulation grid is empty");
  std::vector<TableRow> rows;
  for (std::size_t c = 0; c < grid.size(); ++c) {
    const SimulationSpec& cell = grid[c];
    if (options.already_done && options.already_done(cell)) continue;
    std::vector<TableRow> cell_rows;
    for (TestKind test : cell.tests) cell_rows.push_back(TableRow{cell, test, std::nullopt, {}});
    try {
      cell.validate();
      // A test whose threshold cannot be formed for this cell (Mao tests at
      // n < 7) is reported on its own row; the others still run.
      SimulationSpec runnable = cell;
      runnable.tests.clear();
      for (TableRow& row : cell_rows) {
        try {
          region_threshold(row.test, cell.n, cell.p, Probability(cell.alpha));
          runnable.tests.push_back(row.test);
        } catch (const Error& e) {
          row.error = e.what();
        }
      }
      if (!runnable.tests.empty()) {
        const SimulationResult result = estimate_rejection_rate(runnable, RunOptions{options.threads});
        for (TableRow& row : cell_rows) {
          if (row.error.empty()) row.outcome = result.at(row.test);
        }
      }
    } catch (const Error& e) {
      for (TableRow& row : cell_rows) {
        row.outcome.reset();
        row.error = e.what();
      }
      if (cell_rows.empty()) cell_rows.push_back(TableRow{cell, TestKind::t_star, std::nullopt, e.what()});
    }
    if (options.on_cell) options.on_cell(c, cell, cell_rows);
    rows.insert(rows.end(), cell_rows.begin(), cell_rows.end());
  }
  return rows;
}

std::vector<SimulationSpec> table_grid(double rho, double alpha, std::uint64_t replications,
                                       std::uint64_t seed) {
  std::vector<SimulationSpec> grid;
  for (std::size_t n : kTableSampleSizes) {
    for (std::size_t p : kTableDimensions) {
      SimulationSpec spec;
      spec.n = n;
      spec.p = p;
      spec.rho = rho;
      spec.alpha = alpha;
      spec.replications = replications;
      spec.seed = seed;
      grid.push_back(spec);
    }
  }
  return grid;
}

}  // namespace indep
