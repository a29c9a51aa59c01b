#include "indep/statistics.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdint>

#include "indep/error.hpp"

namespace indep {

namespace {

// p(p-1) formed in 64-bit integer arithmetic before conversion.
double pair_product(std::size_t p) {
  const auto wide = static_cast<std::uint64_t>(p);
  return static_cast<double>(wide * (wide - 1));
}

void require_dimension(std::size_t p) {
  if (p < 2) throw DomainError("need p >= 2, got " + std::to_string(p));
}

void require_schott_n(std::size_t n) {
  if (n < 3) throw SampleSizeError("Schott statistics need n >= 3, got " + std::to_string(n));
}

void require_mao_n(std::size_t n) {
  if (n < 7) throw SampleSizeError("Mao statistics need n >= 7, got " + std::to_string(n));
}

void require_not_unit(double r) {
  if (std::abs(r) >= 1.0) {
    throw DegenerateCorrelationError("a sample correlation equals +-1; statistic is infinite");
  }
}

[[maybe_unused]] bool close_relative(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

double schott_t(const CorrelationSummary& corr) {
  double sum = 0.0;
  for (double r : corr.offdiag()) sum += r * r;
  return sum;
}

double mao_T(const CorrelationSummary& corr) {
  double sum = 0.0;
  for (double r : corr.offdiag()) {
    require_not_unit(r);
    const double r2 = r * r;
    sum += r2 / (1.0 - r2);
  }
  return sum;
}

double fisher_Q(const CorrelationSummary& corr) {
  const std::size_t n = corr.n();
  if (n < 4) throw SampleSizeError("Fisher Q needs n >= 4, got " + std::to_string(n));
  double sum = 0.0;
  for (double r : corr.offdiag()) {
    require_not_unit(r);
    const double z = std::atanh(r);
    sum += z * z;
  }
  const double pp = pair_product(corr.p());
  return (static_cast<double>(n - 3) * sum - 0.5 * pp) / std::sqrt(pp);
}

double schott_null_mean(std::size_t n, std::size_t p) {
  require_schott_n(n);
  require_dimension(p);
  return pair_product(p) / (2.0 * static_cast<double>(n - 1));
}

double schott_tau_sq(std::size_t n, std::size_t p) {
  require_schott_n(n);
  require_dimension(p);
  const double nm1 = static_cast<double>(n - 1);
  return pair_product(p) * static_cast<double>(n - 2) / (nm1 * nm1 * static_cast<double>(n + 1));
}

double mao_null_mean(std::size_t n, std::size_t p) {
  require_mao_n(n);
  require_dimension(p);
  return pair_product(p) / (2.0 * static_cast<double>(n - 4));
}

double mao_sigma_sq(std::size_t n, std::size_t p) {
  require_mao_n(n);
  require_dimension(p);
  const double nm4 = static_cast<double>(n - 4);
  return pair_product(p) * static_cast<double>(n - 3) / (nm4 * nm4 * static_cast<double>(n - 6));
}

double normalize_schott(double t, std::size_t n, std::size_t p) {
  return (t - schott_null_mean(n, p)) / std::sqrt(schott_tau_sq(n, p));
}

double normalize_mao(double T, std::size_t n, std::size_t p) {
  return (T - mao_null_mean(n, p)) / std::sqrt(mao_sigma_sq(n, p));
}

double chisq_calibrated_mao_via_normalized(double T, std::size_t n, std::size_t p) {
  const double pp = pair_product(p);
  return std::sqrt(pp) * normalize_mao(T, n, p) + 0.5 * pp;
}

double chisq_calibrated_mao(double T, std::size_t n, std::size_t p) {
  require_mao_n(n);
  require_dimension(p);
  const double pp = pair_product(p);
  const double shrink = std::sqrt(static_cast<double>(n - 6) / static_cast<double>(n - 3));
  const double value = shrink * static_cast<double>(n - 4) * T + 0.5 * pp * (1.0 - shrink);
  assert(close_relative(value, chisq_calibrated_mao_via_normalized(T, n, p), 1e-9));
  return value;
}

double chisq_calibrated_schott_via_normalized(double t, std::size_t n, std::size_t p) {
  const double pp = pair_product(p);
  return std::sqrt(pp) * normalize_schott(t, n, p) + 0.5 * pp;
}

double chisq_calibrated_schott(double t, std::size_t n, std::size_t p) {
  require_schott_n(n);
  require_dimension(p);
  const double pp = pair_product(p);
  const double stretch = std::sqrt(static_cast<double>(n + 1) / static_cast<double>(n - 2));
  const double value = stretch * static_cast<double>(n - 1) * t + 0.5 * pp * (1.0 - stretch);
  assert(close_relative(value, chisq_calibrated_schott_via_normalized(t, n, p), 1e-9));
  return value;
}

StatisticReport compute_statistics(const CorrelationSummary& corr) {
  StatisticReport report;
  report.n = corr.n();
  report.p = corr.p();
  report.t = schott_t(corr);
  report.tau_sq = schott_tau_sq(report.n, report.p);
  report.t_star = normalize_schott(report.t, report.n, report.p);
  report.t_c = chisq_calibrated_schott(report.t, report.n, report.p);

  try {
    report.T = mao_T(corr);
  } catch (const Error& e) {
    report.errors["T"] = e.what();
  }
  if (report.T) {
    try {
      report.sigma_sq = mao_sigma_sq(report.n, report.p);
      report.T_star = normalize_mao(*report.T, report.n, report.p);
      report.T_c = chisq_calibrated_mao(*report.T, report.n, report.p);
    } catch (const Error& e) {
      report.errors["T_star"] = e.what();
      report.errors["T_c"] = e.what();
    }
  } else {
    report.errors["T_star"] = report.errors["T"];
    report.errors["T_c"] = report.errors["T"];
  }

  try {
    report.Q = fisher_Q(corr);
  } catch (const Error& e) {
    report.errors["Q"] = e.what();
  }
  return report;
}

}  // namespace indep
