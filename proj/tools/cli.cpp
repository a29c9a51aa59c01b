#include "cli.hpp"

#include <CLI11.hpp>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <json.hpp>
#include <set>
#include <sstream>
#include <tuple>

#include "indep/error.hpp"
#include "indep/oracle.hpp"
#include "indep/simulation.hpp"
#include "indep/statistics.hpp"

namespace indep::cli {

namespace {

using json = nlohmann::json;

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    fields.push_back(trim(line.substr(start, comma == std::string_view::npos ? comma : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

std::optional<double> parse_number(std::string_view field) {
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size() || field.empty()) return std::nullopt;
  return value;
}

// Shortest text that parses back to the same double.
std::string shortest(double value) {
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
  return std::string(buffer, ec == std::errc() ? ptr : buffer);
}

std::string fixed(double value, int decimals) {
  if (std::isnan(value)) return "nan";
  std::ostringstream s;
  s << std::fixed << std::setprecision(decimals) << value;
  return s.str();
}

std::string scientific(double value) {
  std::ostringstream s;
  s << std::scientific << std::setprecision(6) << value;
  return s.str();
}

json optional_number(const std::optional<double>& value) {
  return value ? json(*value) : json(nullptr);
}

void write_text_value(std::ostream& out, std::string_view name, const std::optional<double>& value,
                      const StatisticReport& report) {
  out << "  " << std::left << std::setw(9) << name << std::right;
  if (value) {
    out << fixed(*value, 4) << '\n';
  } else {
    auto it = report.errors.find(std::string(name));
    out << "unavailable" << (it != report.errors.end() ? " (" + it->second + ")" : "") << '\n';
  }
}

struct DecisionOutcome {
  TestKind test;
  std::optional<DecisionReport> decision;
  std::string error;
};

// ---- simulate ------------------------------------------------------------

using CellKey = std::tuple<std::size_t, std::size_t, double, double, std::uint64_t, std::uint64_t>;

CellKey key_of(const SimulationSpec& s) {
  return {s.n, s.p, s.rho, s.alpha, s.replications, s.seed};
}

constexpr std::string_view kCsvHeader = "test,n,p,rho,alpha,replications,seed,reject_rate,mc_se";

// Cells (by key) recorded in an earlier CSV run. Missing file means none.
std::set<CellKey> completed_cells(const std::string& path, bool& has_content) {
  std::set<CellKey> done;
  has_content = false;
  std::ifstream in(path);
  if (!in) return done;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    has_content = true;
    if (trim(line) == kCsvHeader) continue;
    const auto f = split_fields(line);
    if (f.size() != 9) throw ParseError(line_no, 0, "resume file: expected 9 fields");
    // Rows without a rate are failed cells; they are run again.
    if (f[7].empty()) continue;
    const auto n = parse_number(f[1]), p = parse_number(f[2]), rho = parse_number(f[3]),
               alpha = parse_number(f[4]), reps = parse_number(f[5]), seed = parse_number(f[6]);
    if (!n || !p || !rho || !alpha || !reps || !seed) {
      throw ParseError(line_no, 0, "resume file: malformed row");
    }
    std::uint64_t seed_value = 0;
    std::from_chars(f[6].data(), f[6].data() + f[6].size(), seed_value);
    done.insert({static_cast<std::size_t>(*n), static_cast<std::size_t>(*p), *rho, *alpha,
                 static_cast<std::uint64_t>(*reps), seed_value});
  }
  return done;
}

json row_json(const TableRow& row) {
  json j{{"test", test_name(row.test)},
         {"n", row.cell.n},
         {"p", row.cell.p},
         {"rho", row.cell.rho},
         {"alpha", row.cell.alpha},
         {"replications", row.cell.replications},
         {"seed", row.cell.seed}};
  if (row.outcome) {
    j["reject_rate"] = row.outcome->rejection_rate;
    j["mc_se"] = row.outcome->mc_standard_error;
    j["rejection_count"] = row.outcome->rejection_count;
    j["error_count"] = row.outcome->error_count;
  } else {
    j["reject_rate"] = nullptr;
    j["mc_se"] = nullptr;
    j["error"] = row.error;
  }
  return j;
}

void write_csv_row(std::ostream& out, const TableRow& row) {
  out << test_name(row.test) << ',' << row.cell.n << ',' << row.cell.p << ','
      << shortest(row.cell.rho) << ',' << shortest(row.cell.alpha) << ',' << row.cell.replications
      << ',' << row.cell.seed << ',';
  if (row.outcome) {
    out << fixed(row.outcome->rejection_rate, 4) << ',' << fixed(row.outcome->mc_standard_error, 6);
  } else {
    out << ',';
  }
  out << '\n';
}

void write_text_row(std::ostream& out, const TableRow& row) {
  out << std::left << std::setw(8) << test_name(row.test) << std::right << std::setw(6) << row.cell.n
      << std::setw(6) << row.cell.p << std::setw(8) << shortest(row.cell.rho) << "  ";
  if (row.outcome) {
    out << fixed(row.outcome->rejection_rate, 4) << "  (se " << fixed(row.outcome->mc_standard_error, 4)
        << ")";
    if (row.outcome->error_count > 0) out << "  [" << row.outcome->error_count << " degenerate]";
  } else {
    out << "error: " << row.error;
  }
  out << '\n';
}

}  // namespace

OutputFormat parse_format(const std::string& name) {
  if (name == "text") return OutputFormat::text;
  if (name == "csv") return OutputFormat::csv;
  if (name == "json") return OutputFormat::json;
  throw DomainError("unknown format '" + name + "' (expected text, csv or json)");
}

DataMatrix read_data_csv(std::istream& in) {
  std::vector<double> values;
  std::size_t columns = 0;
  std::size_t rows = 0;
  std::size_t line_no = 0;
  bool first_content = true;
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    if (line_no == 1 && view.starts_with("\xEF\xBB\xBF")) view.remove_prefix(3);
    if (trim(view).empty()) continue;
    const auto fields = split_fields(view);
    if (first_content) {
      first_content = false;
      bool all_numeric = true;
      for (auto f : fields) all_numeric = all_numeric && parse_number(f).has_value();
      columns = fields.size();
      if (!all_numeric) continue;  // header row
    }
    if (fields.size() != columns) {
      throw ParseError(line_no, 0,
                       "line " + std::to_string(line_no) + ": expected " + std::to_string(columns) +
                           " fields, found " + std::to_string(fields.size()));
    }
    for (std::size_t c = 0; c < fields.size(); ++c) {
      const auto value = parse_number(fields[c]);
      if (!value || !std::isfinite(*value)) {
        throw ParseError(line_no, c + 1,
                         "line " + std::to_string(line_no) + ", column " + std::to_string(c + 1) +
                             ": not a finite number: '" + std::string(fields[c]) + "'");
      }
      values.push_back(*value);
    }
    ++rows;
  }
  if (rows == 0) throw ParseError(0, 0, "no data rows");
  return DataMatrix(rows, columns, std::move(values));
}

int cmd_test(const TestConfig& config, std::ostream& out, std::ostream& err) {
  Probability alpha(0.0);
  try {
    alpha = Probability(config.alpha);
    if (config.alpha <= 0.0 || config.alpha >= 1.0) throw DomainError("alpha must lie in (0, 1)");
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  StatisticReport report;
  try {
    std::ifstream in(config.input_path);
    if (!in) throw ParseError(0, 0, "cannot open '" + config.input_path + "'");
    report = compute_statistics(correlation_summary(read_data_csv(in)));
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }

  std::vector<DecisionOutcome> outcomes;
  for (TestKind kind : config.tests) {
    DecisionOutcome outcome{kind, std::nullopt, {}};
    try {
      outcome.decision = decide(kind, report, alpha);
    } catch (const Error& e) {
      outcome.error = e.what();
    }
    outcomes.push_back(std::move(outcome));
  }

  switch (config.format) {
    case OutputFormat::json: {
      json statistics{{"t", report.t},
                      {"T", optional_number(report.T)},
                      {"Q", optional_number(report.Q)},
                      {"t_star", report.t_star},
                      {"T_star", optional_number(report.T_star)},
                      {"t_c", report.t_c},
                      {"T_c", optional_number(report.T_c)},
                      {"tau_sq", report.tau_sq},
                      {"sigma_sq", optional_number(report.sigma_sq)}};
      json decisions = json::array();
      for (const auto& o : outcomes) {
        if (o.decision) {
          const DecisionReport& d = *o.decision;
          decisions.push_back({{"test_name", test_name(d.test)},
                               {"statistic", d.statistic},
                               {"calibrated", d.calibrated},
                               {"threshold", d.threshold},
                               {"alpha", d.alpha},
                               {"reject", d.reject},
                               {"p_value", d.p_value}});
        } else {
          decisions.push_back({{"test_name", test_name(o.test)}, {"error", o.error}});
        }
      }
      json doc{{"n", report.n},
               {"p", report.p},
               {"alpha", alpha.value()},
               {"statistics", statistics},
               {"errors", report.errors},
               {"decisions", decisions}};
      out << doc.dump(2) << '\n';
      break;
    }
    case OutputFormat::csv: {
      out << "test_name,statistic,calibrated,threshold,alpha,p_value,reject,error\n";
      for (const auto& o : outcomes) {
        out << test_name(o.test) << ',';
        if (o.decision) {
          const DecisionReport& d = *o.decision;
          out << shortest(d.statistic) << ',' << shortest(d.calibrated) << ',' << shortest(d.threshold)
              << ',' << shortest(d.alpha) << ',' << shortest(d.p_value) << ','
              << (d.reject ? "true" : "false") << ",\n";
        } else {
          out << ",,,,,,\"" << o.error << "\"\n";
        }
      }
      break;
    }
    case OutputFormat::text: {
      out << "n = " << report.n << ", p = " << report.p << ", alpha = " << shortest(alpha.value())
          << "\n\nstatistics\n";
      write_text_value(out, "t", report.t, report);
      write_text_value(out, "T", report.T, report);
      write_text_value(out, "Q", report.Q, report);
      write_text_value(out, "t_star", report.t_star, report);
      write_text_value(out, "T_star", report.T_star, report);
      write_text_value(out, "t_c", report.t_c, report);
      write_text_value(out, "T_c", report.T_c, report);
      write_text_value(out, "tau_sq", report.tau_sq, report);
      write_text_value(out, "sigma_sq", report.sigma_sq, report);
      out << "\ndecisions\n";
      for (const auto& o : outcomes) {
        out << "  " << std::left << std::setw(8) << test_name(o.test) << std::right;
        if (o.decision) {
          const DecisionReport& d = *o.decision;
          out << "statistic " << fixed(d.statistic, 4) << "  threshold " << fixed(d.threshold, 4)
              << "  p-value " << fixed(d.p_value, 4) << "  " << (d.reject ? "REJECT" : "accept")
              << '\n';
        } else {
          out << "error: " << o.error << '\n';
        }
      }
      break;
    }
  }
  return kExitOk;
}

int cmd_simulate(const SimulateConfig& config, std::ostream& out, std::ostream& err) {
  std::vector<SimulationSpec> grid;
  if (config.preset) {
    if (config.n || config.p) {
      err << "error: --preset cannot be combined with --n/--p\n";
      return kExitUsage;
    }
    double rho;
    if (*config.preset == "table1") {
      rho = 0.0;
    } else if (*config.preset == "table2") {
      rho = 0.02;
    } else {
      err << "error: unknown preset '" << *config.preset << "' (expected table1 or table2)\n";
      return kExitUsage;
    }
    grid = table_grid(rho, config.alpha, config.replications, config.seed);
  } else {
    if (!config.n || !config.p) {
      err << "error: simulate needs --preset or both --n and --p\n";
      return kExitUsage;
    }
    SimulationSpec spec;
    spec.n = *config.n;
    spec.p = *config.p;
    spec.rho = config.rho;
    spec.alpha = config.alpha;
    spec.replications = config.replications;
    spec.seed = config.seed;
    grid.push_back(spec);
  }
  for (SimulationSpec& cell : grid) cell.tests = config.tests;

  if (!(config.alpha > 0.0 && config.alpha < 1.0) || config.replications == 0) {
    err << "error: need 0 < alpha < 1 and a positive replication count\n";
    return kExitUsage;
  }

  std::set<CellKey> done;
  bool resumed_content = false;
  if (config.resume_from) {
    if (config.format != OutputFormat::csv) {
      err << "error: resuming is only supported for CSV output\n";
      return kExitUsage;
    }
    try {
      done = completed_cells(*config.resume_from, resumed_content);
    } catch (const Error& e) {
      err << "error: " << e.what() << '\n';
      return kExitData;
    }
  }

  TableOptions options;
  options.threads = config.threads;
  options.already_done = [&](const SimulationSpec& cell) { return done.contains(key_of(cell)); };

  if (config.format == OutputFormat::csv && !resumed_content) out << kCsvHeader << '\n';
  if (config.format == OutputFormat::text) {
    out << "test         n     p     rho  rate\n";
  }
  options.on_cell = [&](std::size_t index, const SimulationSpec& cell, const std::vector<TableRow>& rows) {
    err << "[" << index + 1 << "/" << grid.size() << "] n=" << cell.n << " p=" << cell.p
        << " rho=" << shortest(cell.rho) << '\n';
    for (const TableRow& row : rows) {
      if (!row.error.empty()) {
        err << "  " << test_name(row.test) << ": " << row.error << '\n';
      }
      // CSV and text rows stream out as each cell finishes.
      if (config.format == OutputFormat::csv) write_csv_row(out, row);
      if (config.format == OutputFormat::text) write_text_row(out, row);
    }
    out.flush();
  };

  const std::vector<TableRow> rows = run_table(grid, options);
  if (config.format == OutputFormat::json) {
    json doc = json::array();
    for (const TableRow& row : rows) doc.push_back(row_json(row));
    out << doc.dump(2) << '\n';
  }
  return kExitOk;
}

int cmd_validate(const ValidateConfig& config, std::ostream& out, std::ostream& err) {
  MonteCarloOptions options;
  options.threads = config.threads;
  options.vectors_per_draw = config.vectors_per_draw;

  bool all_pass = true;
  json doc = json::array();
  if (config.format == OutputFormat::csv) {
    out << "identity,n,draws,analytic,empirical,mc_se,relative_error,tolerance_kind,tolerance,pass\n";
  } else if (config.format == OutputFormat::text) {
    out << std::left << std::setw(34) << "identity" << std::right << std::setw(5) << "n"
        << std::setw(15) << "analytic" << std::setw(15) << "empirical" << std::setw(11) << "rel.err"
        << std::setw(14) << "tolerance" << "  result\n";
  }

  const auto suite = default_validation_suite();
  for (std::size_t k = 0; k < suite.size(); ++k) {
    const ValidationCase& c = suite[k];
    MomentCheck check{};
    try {
      check = verify_moment_by_simulation(c.identity, c.n, config.draws,
                                          config.seed + static_cast<std::uint64_t>(k), options);
    } catch (const Error& e) {
      err << "error: " << e.what() << '\n';
      return kExitUsage;
    }
    const bool ok = passes(c, check);
    all_pass = all_pass && ok;
    const std::string tolerance_kind = c.kind == ToleranceKind::relative ? "relative" : "std_errors";
    switch (config.format) {
      case OutputFormat::json:
        doc.push_back({{"identity", identity_name(c.identity)},
                       {"n", c.n},
                       {"draws", check.draws},
                       {"analytic", check.analytic},
                       {"empirical", check.empirical},
                       {"mc_se", check.mc_standard_error},
                       {"relative_error", std::isfinite(check.relative_error)
                                              ? json(check.relative_error)
                                              : json(nullptr)},
                       {"tolerance_kind", tolerance_kind},
                       {"tolerance", c.tolerance},
                       {"pass", ok}});
        break;
      case OutputFormat::csv:
        out << '"' << identity_name(c.identity) << "\"," << c.n << ',' << check.draws << ','
            << shortest(check.analytic) << ',' << shortest(check.empirical) << ','
            << shortest(check.mc_standard_error) << ',' << shortest(check.relative_error) << ','
            << tolerance_kind << ',' << shortest(c.tolerance) << ',' << (ok ? "true" : "false") << '\n';
        break;
      case OutputFormat::text: {
        out << std::left << std::setw(34) << identity_name(c.identity) << std::right << std::setw(5)
            << c.n;
        out << std::setw(15) << scientific(check.analytic) << std::setw(15)
            << scientific(check.empirical);
        out << std::setw(11)
            << (c.kind == ToleranceKind::relative ? fixed(check.relative_error * 100.0, 2) + "%"
                                                  : std::string("-"));
        out << std::setw(14)
            << (c.kind == ToleranceKind::relative ? fixed(c.tolerance * 100.0, 0) + "%"
                                                  : fixed(c.tolerance, 0) + " se");
        out << "  " << (ok ? "PASS" : "FAIL");
        if (c.kind == ToleranceKind::standard_errors && check.mc_standard_error > 0.0) {
          out << " (" << fixed(std::abs(check.empirical - check.analytic) / check.mc_standard_error, 2)
              << " se)";
        }
        out << '\n';
        break;
      }
    }
  }
  if (config.format == OutputFormat::json) out << doc.dump(2) << '\n';
  return all_pass ? kExitOk : kExitValidation;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Tests for complete independence of high-dimensional normal vectors"};
  app.require_subcommand(1);

  std::vector<std::string> test_names;
  std::string format_name;
  std::string output_path;
  unsigned threads = 1;

  TestConfig test_config;
  auto* test_cmd = app.add_subcommand("test", "Run the tests on a CSV data file");
  test_cmd->add_option("input", test_config.input_path, "CSV file: rows are observations")->required();
  test_cmd->add_option("--alpha", test_config.alpha, "Significance level")->capture_default_str();
  test_cmd->add_option("--tests", test_names, "Comma-separated subset of t_star,T_star,t_c,T_c")
      ->delimiter(',');
  test_cmd->add_option("--format", format_name, "text, csv or json")->default_str("text");
  test_cmd->add_option("--output", output_path, "Write the report here instead of stdout");

  SimulateConfig sim_config;
  std::string preset;
  std::size_t sim_n = 0, sim_p = 0;
  auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo size and power");
  sim_cmd->add_option("--preset", preset, "table1 (rho=0) or table2 (rho=0.02)");
  auto* n_opt = sim_cmd->add_option("--n", sim_n, "Sample size");
  auto* p_opt = sim_cmd->add_option("--p", sim_p, "Dimension");
  sim_cmd->add_option("--rho", sim_config.rho, "Equicorrelation")->capture_default_str();
  sim_cmd->add_option("--alpha", sim_config.alpha, "Significance level")->capture_default_str();
  sim_cmd->add_option("--reps", sim_config.replications, "Replications per cell")->capture_default_str();
  sim_cmd->add_option("--seed", sim_config.seed, "Master seed")->capture_default_str();
  sim_cmd->add_option("--tests", test_names, "Comma-separated subset of t_star,T_star,t_c,T_c")
      ->delimiter(',');
  sim_cmd->add_option("--format", format_name, "text, csv or json")->default_str("csv");
  sim_cmd->add_option("--threads", threads, "Worker threads (0 = all cores)")->capture_default_str();
  sim_cmd->add_option("--output", output_path, "Write the table here instead of stdout");
  bool resume = false;
  sim_cmd->add_flag("--resume", resume, "Skip cells already present in the --output CSV");

  ValidateConfig val_config;
  auto* val_cmd = app.add_subcommand("validate", "Monte Carlo check of the exact moment identities");
  val_cmd->add_option("--reps", val_config.draws, "Draws per identity")->capture_default_str();
  val_cmd->add_option("--seed", val_config.seed, "Master seed")->capture_default_str();
  val_cmd->add_option("--vectors", val_config.vectors_per_draw, "Sphere vectors per draw")
      ->capture_default_str();
  val_cmd->add_option("--threads", threads, "Worker threads (0 = all cores)")->capture_default_str();
  val_cmd->add_option("--format", format_name, "text, csv or json")->default_str("text");
  val_cmd->add_option("--output", output_path, "Write the report here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  std::vector<TestKind> tests;
  OutputFormat format;
  try {
    for (const auto& name : test_names) tests.push_back(parse_test_name(name));
    format = format_name.empty() ? (sim_cmd->parsed() ? OutputFormat::csv : OutputFormat::text)
                                 : parse_format(format_name);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  std::ofstream file;
  std::ostream* sink = &out;
  if (!output_path.empty()) {
    const bool append = sim_cmd->parsed() && resume;
    file.open(output_path, append ? std::ios::app : std::ios::trunc);
    if (!file) {
      err << "error: cannot write '" << output_path << "'\n";
      return kExitUsage;
    }
    sink = &file;
  }

  if (test_cmd->parsed()) {
    if (!tests.empty()) test_config.tests = tests;
    test_config.format = format;
    return cmd_test(test_config, *sink, err);
  }
  if (sim_cmd->parsed()) {
    if (!preset.empty()) sim_config.preset = preset;
    if (n_opt->count() > 0) sim_config.n = sim_n;
    if (p_opt->count() > 0) sim_config.p = sim_p;
    if (!tests.empty()) sim_config.tests = tests;
    sim_config.format = format;
    sim_config.threads = threads;
    if (resume) {
      if (output_path.empty()) {
        err << "error: --resume needs --output\n";
        return kExitUsage;
      }
      sim_config.resume_from = output_path;
    }
    return cmd_simulate(sim_config, *sink, err);
  }
  val_config.format = format;
  val_config.threads = threads;
  return cmd_validate(val_config, *sink, err);
}

}  // namespace indep::cli
