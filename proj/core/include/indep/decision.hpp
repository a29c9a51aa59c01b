#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "indep/distributions.hpp"
#include "indep/statistics.hpp"

namespace indep {

/// The four level-alpha tests. Each rejects when its raw statistic (t for the
/// Schott tests, T for the Mao tests) is at or above a threshold.
enum class TestKind { t_star, T_star, t_c, T_c };

inline constexpr std::array<TestKind, 4> kAllTests = {TestKind::t_star, TestKind::T_star,
                                                      TestKind::t_c, TestKind::T_c};

std::string_view test_name(TestKind kind);
/// Accepts exactly "t_star", "T_star", "t_c", "T_c". Throws DomainError otherwise.
TestKind parse_test_name(std::string_view name);
/// True for the Mao tests (T_star, T_c).
bool uses_mao_statistic(TestKind kind);

/// Thresholds on the raw statistic; the rejection regions are closed.
/// Normal-calibrated regions:
///   T >= p(p-1)/(2(n-4)) + z_alpha sigma_np          (n >= 7)
///   t >= p(p-1)/(2(n-1)) + z_alpha tau_np            (n >= 3)
/// Chi-square-calibrated regions, with c = chi2_alpha(p(p-1)/2):
///   T >= p(p-1)/(2(n-4)) (1 - sqrt((n-3)/(n-6))) + c sqrt((n-3)/((n-4)^2 (n-6)))
///   t >= p(p-1)/(2(n-1)) (1 - sqrt((n-2)/(n+1))) + c sqrt((n-2)/((n-1)^2 (n+1)))
/// The chi-square regions are exactly {T^c >= c} and {t^c >= c}.
double region_T_star(std::size_t n, std::size_t p, Probability alpha);
double region_T_c(std::size_t n, std::size_t p, Probability alpha);
double region_t_star(std::size_t n, std::size_t p, Probability alpha);
double region_t_c(std::size_t n, std::size_t p, Probability alpha);

/// The chi-square regions with the centering term's sign reversed, as they
/// are commonly quoted. These do not match {T^c >= c} / {t^c >= c} and have
/// badly wrong size for large p; kept for comparison only.
double region_T_c_as_printed(std::size_t n, std::size_t p, Probability alpha);
double region_t_c_as_printed(std::size_t n, std::size_t p, Probability alpha);

double region_threshold(TestKind kind, std::size_t n, std::size_t p, Probability alpha);

/// One-sided p-value: 1 - Phi(t* or T*) for the normal tests,
/// P(chi2_{p(p-1)/2} > t^c or T^c) for the chi-square tests.
/// Throws DomainError when the report lacks the needed statistic.
double p_value(TestKind kind, const StatisticReport& report);

struct DecisionReport {
  TestKind test;
  double statistic;   // raw t or T
  double calibrated;  // t*, T*, t^c or T^c
  double threshold;   // on the raw statistic
  double alpha;
  bool reject;
  double p_value;
};

DecisionReport decide(TestKind kind, const StatisticReport& report, Probability alpha);

}  // namespace indep
