#include "indep/decision.hpp"

#include <cmath>
#include <cstdint>

#include "indep/error.hpp"

namespace indep {

namespace {

double pair_product(std::size_t p) {
  const auto wide = static_cast<std::uint64_t>(p);
  return static_cast<double>(wide * (wide - 1));
}

DegreesOfFreedom pair_df(std::size_t p) { return DegreesOfFreedom(0.5 * pair_product(p)); }

double require_value(const std::optional<double>& value, const StatisticReport& report,
                     std::string_view field) {
  if (value) return *value;
  auto it = report.errors.find(std::string(field));
  throw DomainError(std::string(field) + " unavailable" +
                    (it != report.errors.end() ? ": " + it->second : std::string()));
}

}  // namespace

std::string_view test_name(TestKind kind) {
  switch (kind) {
    case TestKind::t_star: return "t_star";
    case TestKind::T_star: return "T_star";
    case TestKind::t_c: return "t_c";
    case TestKind::T_c: return "T_c";
  }
  return "unknown";
}

TestKind parse_test_name(std::string_view name) {
  for (TestKind kind : kAllTests) {
    if (test_name(kind) == name) return kind;
  }
  throw DomainError("unknown test '" + std::string(name) +
                    "' (expected t_star, T_star, t_c or T_c)");
}

bool uses_mao_statistic(TestKind kind) {
  return kind == TestKind::T_star || kind == TestKind::T_c;
}

double region_T_star(std::size_t n, std::size_t p, Probability alpha) {
  return mao_null_mean(n, p) + std_normal_quantile(alpha) * std::sqrt(mao_sigma_sq(n, p));
}

double region_T_c(std::size_t n, std::size_t p, Probability alpha) {
  const double mean = mao_null_mean(n, p);
  const double nm3 = static_cast<double>(n - 3);
  const double nm4 = static_cast<double>(n - 4);
  const double nm6 = static_cast<double>(n - 6);
  return mean * (1.0 - std::sqrt(nm3 / nm6)) +
         chisq_quantile(alpha, pair_df(p)) * std::sqrt(nm3 / (nm4 * nm4 * nm6));
}

double region_T_c_as_printed(std::size_t n, std::size_t p, Probability alpha) {
  const double mean = mao_null_mean(n, p);
  const double nm3 = static_cast<double>(n - 3);
  const double nm4 = static_cast<double>(n - 4);
  const double nm6 = static_cast<double>(n - 6);
  return mean * (std::sqrt(nm3 / nm6) - 1.0) +
         chisq_quantile(alpha, pair_df(p)) * std::sqrt(nm3 / (nm4 * nm4 * nm6));
}

double region_t_star(std::size_t n, std::size_t p, Probability alpha) {
  return schott_null_mean(n, p) + std_normal_quantile(alpha) * std::sqrt(schott_tau_sq(n, p));
}

double region_t_c(std::size_t n, std::size_t p, Probability alpha) {
  const double mean = schott_null_mean(n, p);
  const double nm1 = static_cast<double>(n - 1);
  const double nm2 = static_cast<double>(n - 2);
  const double np1 = static_cast<double>(n + 1);
  return mean * (1.0 - std::sqrt(nm2 / np1)) +
         chisq_quantile(alpha, pair_df(p)) * std::sqrt(nm2 / (nm1 * nm1 * np1));
}

double region_t_c_as_printed(std::size_t n, std::size_t p, Probability alpha) {
  const double mean = schott_null_mean(n, p);
  const double nm1 = static_cast<double>(n - 1);
  const double nm2 = static_cast<double>(n - 2);
  const double np1 = static_cast<double>(n + 1);
  return mean * (std::sqrt(nm2 / np1) - 1.0) +
         chisq_quantile(alpha, pair_df(p)) * std::sqrt(nm2 / (nm1 * nm1 * np1));
}

double region_threshold(TestKind kind, std::size_t n, std::size_t p, Probability alpha) {
  switch (kind) {
    case TestKind::t_star: return region_t_star(n, p, alpha);
    case TestKind::T_star: return region_T_star(n, p, alpha);
    case TestKind::t_c: return region_t_c(n, p, alpha);
    case TestKind::T_c: return region_T_c(n, p, alpha);
  }
  throw DomainError("unknown test kind");
}

double p_value(TestKind kind, const StatisticReport& report) {
  switch (kind) {
    case TestKind::t_star: return std_normal_sf(report.t_star);
    case TestKind::T_star: return std_normal_sf(require_value(report.T_star, report, "T_star"));
    case TestKind::t_c: return chisq_sf(report.t_c, pair_df(report.p));
    case TestKind::T_c:
      return chisq_sf(require_value(report.T_c, report, "T_c"), pair_df(report.p));
  }
  throw DomainError("unknown test kind");
}

DecisionReport decide(TestKind kind, const StatisticReport& report, Probability alpha) {
  DecisionReport decision{};
  decision.test = kind;
  decision.alpha = alpha.value();
  switch (kind) {
    case TestKind::t_star:
      decision.statistic = report.t;
      decision.calibrated = report.t_star;
      break;
    case TestKind::t_c:
      decision.statistic = report.t;
      decision.calibrated = report.t_c;
      break;
    case TestKind::T_star:
      decision.statistic = require_value(report.T, report, "T");
      decision.calibrated = require_value(report.T_star, report, "T_star");
      break;
    case TestKind::T_c:
      decision.statistic = require_value(report.T, report, "T");
      decision.calibrated = require_value(report.T_c, report, "T_c");
      break;
  }
  decision.threshold = region_threshold(kind, report.n, report.p, alpha);
  decision.reject = decision.statistic >= decision.threshold;
  decision.p_value = p_value(kind, report);
  return decision;
}

}  // namespace indep
