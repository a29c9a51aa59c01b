#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>

#include "indep/correlation.hpp"

namespace indep {

/// Sum of squared off-diagonal correlations (Schott).
double schott_t(const CorrelationSummary& corr);

/// Sum of r^2 / (1 - r^2) over off-diagonal pairs (Mao).
/// Throws DegenerateCorrelationError if some |r| = 1.
double mao_T(const CorrelationSummary& corr);

/// Fisher z-transform statistic ((n-3) sum atanh(r)^2 - p(p-1)/2) / sqrt(p(p-1)).
/// Throws SampleSizeError if n < 4, DegenerateCorrelationError if some |r| = 1.
double fisher_Q(const CorrelationSummary& corr);

/// Null mean and variance of t: p(p-1)/(2(n-1)) and
/// tau^2 = p(p-1)(n-2) / ((n-1)^2 (n+1)). Require n >= 3, p >= 2.
double schott_null_mean(std::size_t n, std::size_t p);
double schott_tau_sq(std::size_t n, std::size_t p);

/// Null mean and variance of T: p(p-1)/(2(n-4)) and
/// sigma^2 = p(p-1)(n-3) / ((n-4)^2 (n-6)). Require n >= 7, p >= 2.
double mao_null_mean(std::size_t n, std::size_t p);
double mao_sigma_sq(std::size_t n, std::size_t p);

/// t* = (t - mean) / tau.
double normalize_schott(double t, std::size_t n, std::size_t p);
/// T* = (T - mean) / sigma. Throws SampleSizeError if n < 7.
double normalize_mao(double T, std::size_t n, std::size_t p);

/// Chi-square calibrated Mao statistic
///   T^c = sqrt((n-6)/(n-3)) (n-4) T + p(p-1)/2 (1 - sqrt((n-6)/(n-3))),
/// which equals sqrt(p(p-1)) T* + p(p-1)/2. Throws SampleSizeError if n < 7.
double chisq_calibrated_mao(double T, std::size_t n, std::size_t p);
/// Same value through sqrt(p(p-1)) T* + p(p-1)/2; kept as a cross-check.
double chisq_calibrated_mao_via_normalized(double T, std::size_t n, std::size_t p);

/// Chi-square calibrated Schott statistic
///   t^c = sqrt((n+1)/(n-2)) (n-1) t + p(p-1)/2 (1 - sqrt((n+1)/(n-2))),
/// which equals sqrt(p(p-1)) t* + p(p-1)/2.
double chisq_calibrated_schott(double t, std::size_t n, std::size_t p);
double chisq_calibrated_schott_via_normalized(double t, std::size_t n, std::size_t p);

/// Every statistic for one data set. Mao- and Fisher-based entries are empty
/// when they cannot be computed; `errors` then holds the reason keyed by the
/// field name.
struct StatisticReport {
  std::size_t n = 0;
  std::size_t p = 0;
  double t = 0.0;
  double t_star = 0.0;
  double t_c = 0.0;
  double tau_sq = 0.0;
  std::optional<double> T;
  std::optional<double> T_star;
  std::optional<double> T_c;
  std::optional<double> sigma_sq;
  std::optional<double> Q;
  std::map<std::string, std::string> errors;
};

StatisticReport compute_statistics(const CorrelationSummary& corr);

}  // namespace indep
