#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "indep/correlation.hpp"
#include "indep/decision.hpp"

namespace indep::cli {

/// Process exit codes.
enum ExitCode : int {
  kExitOk = 0,          // ran to completion (whatever the test decisions)
  kExitUsage = 1,       // bad flags or arguments
  kExitData = 2,        // unreadable or invalid input data
  kExitValidation = 3,  // an identity check exceeded its tolerance
};

enum class OutputFormat { text, csv, json };

OutputFormat parse_format(const std::string& name);

struct TestConfig {
  std::string input_path;
  double alpha = 0.05;
  std::vector<TestKind> tests{kAllTests.begin(), kAllTests.end()};
  OutputFormat format = OutputFormat::text;
};

struct SimulateConfig {
  /// "table1" (rho = 0) or "table2" (rho = 0.02); otherwise n, p, rho
  /// describe a single cell.
  std::optional<std::string> preset;
  std::optional<std::size_t> n;
  std::optional<std::size_t> p;
  double rho = 0.0;
  double alpha = 0.05;
  std::uint64_t replications = 10000;
  std::uint64_t seed = 20140101;
  std::vector<TestKind> tests{kAllTests.begin(), kAllTests.end()};
  OutputFormat format = OutputFormat::csv;
  unsigned threads = 1;
  /// Cells already present in this CSV file are skipped.
  std::optional<std::string> resume_from;
};

struct ValidateConfig {
  std::uint64_t draws = 1000000;
  std::uint64_t seed = 20140101;
  std::size_t vectors_per_draw = 12;
  unsigned threads = 1;
  OutputFormat format = OutputFormat::text;
};

/// Reads a comma-separated n x p matrix: rows are observations, columns are
/// variables. A first row that is not entirely numeric is taken as a header.
/// Throws ParseError with 1-based line and column.
DataMatrix read_data_csv(std::istream& in);

/// Each command writes its report to `out` and diagnostics to `err`, and
/// returns an ExitCode.
int cmd_test(const TestConfig& config, std::ostream& out, std::ostream& err);
int cmd_simulate(const SimulateConfig& config, std::ostream& out, std::ostream& err);
int cmd_validate(const ValidateConfig& config, std::ostream& out, std::ostream& err);

/// Full command line entry point (argv[0] is the program name).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace indep::cli
