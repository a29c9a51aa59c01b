#pragma once

// Standard normal and chi-square distribution functions.
//
// Critical values follow the upper-tail convention used by one-sided
// rejection regions: std_normal_quantile(a) returns z with Phi(z) = 1 - a,
// chisq_quantile(a, df) returns x with P(chi2_df <= x) = 1 - a.

namespace indep {

class Probability {
 public:
  /// Throws DomainError unless 0 <= value <= 1.
  explicit Probability(double value);
  double value() const noexcept { return value_; }

 private:
  double value_;
};

class DegreesOfFreedom {
 public:
  /// Throws DomainError unless value > 0 and finite.
  explicit DegreesOfFreedom(double value);
  double value() const noexcept { return value_; }

 private:
  double value_;
};

double std_normal_pdf(double x);
double std_normal_cdf(double x);
/// 1 - Phi(x), without cancellation for large x.
double std_normal_sf(double x);
/// Upper-alpha critical value. Throws DomainError unless 0 < alpha < 1.
double std_normal_quantile(Probability alpha);

/// Regularized lower incomplete gamma P(a, x) for a > 0, x >= 0.
double regularized_gamma_p(double a, double x);
/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x).
double regularized_gamma_q(double a, double x);

double chisq_pdf(double x, DegreesOfFreedom df);
double chisq_cdf(double x, DegreesOfFreedom df);
/// P(chi2_df > x).
double chisq_sf(double x, DegreesOfFreedom df);
/// Upper-alpha critical value. Throws DomainError unless 0 < alpha < 1.
double chisq_quantile(Probability alpha, DegreesOfFreedom df);

}  // namespace indep
