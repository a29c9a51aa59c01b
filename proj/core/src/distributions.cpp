#include "indep/distributions.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "indep/error.hpp"

namespace indep {

namespace {

constexpr double kEpsilon = std::numeric_limits<double>::epsilon();
constexpr int kMaxIterations = 100000;

// Stirling correction mu(a) = lgamma(a) - (a - 1/2) log a + a - log(2 pi)/2,
// accurate to double precision for a >= 10.
double stirling_correction(double a) {
  const double a2 = a * a;
  return (1.0 / 12.0 - (1.0 / 360.0 - (1.0 / 1260.0 - (1.0 / 1680.0) / a2) / a2) / a2) / a;
}

// log(x^a e^-x / Gamma(a)) for x > 0.
double log_gamma_prefactor(double a, double x) {
  if (a < 10.0) {
    return a * std::log(x) - x - std::lgamma(a);
  }
  const double d = (x - a) / a;
  // a * (log(x/a) - (x-a)/a) loses nothing to lgamma(a) ~ a log a here.
  return a * (std::log1p(d) - d) + 0.5 * std::log(a / (2.0 * std::numbers::pi)) -
         stirling_correction(a);
}

// P(a, x) by its power series; converges quickly for x < a + 1.
double gamma_p_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  double denom = a;
  for (int i = 0; i < kMaxIterations; ++i) {
    denom += 1.0;
    term *= x / denom;
    sum += term;
    if (std::abs(term) < std::abs(sum) * kEpsilon) {
      break;
    }
  }
  return sum * std::exp(log_gamma_prefactor(a, x));
}

// Q(a, x) by the Legendre continued fraction (modified Lentz); x >= a + 1.
double gamma_q_continued_fraction(double a, double x) {
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIterations; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEpsilon) {
      break;
    }
  }
  return h * std::exp(log_gamma_prefactor(a, x));
}

void require_open_unit(double alpha, const char* what) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw DomainError(std::string(what) + ": alpha must lie in (0, 1), got " +
                      std::to_string(alpha));
  }
}

// Acklam's rational approximation to the lower-tail normal quantile
// (relative error ~1e-9); used only as a starting point for refinement.
double acklam_lower_quantile(double q) {
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00, 2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double low = 0.02425;
  if (q < low) {
    const double r = std::sqrt(-2.0 * std::log(q));
    return (((((c[0] * r + c[1]) * r + c[2]) * r + c[3]) * r + c[4]) * r + c[5]) /
           ((((d[0] * r + d[1]) * r + d[2]) * r + d[3]) * r + 1.0);
  }
  if (q > 1.0 - low) {
    const double r = std::sqrt(-2.0 * std::log1p(-q));
    return -(((((c[0] * r + c[1]) * r + c[2]) * r + c[3]) * r + c[4]) * r + c[5]) /
           ((((d[0] * r + d[1]) * r + d[2]) * r + d[3]) * r + 1.0);
  }
  const double r = q - 0.5;
  const double s = r * r;
  return (((((a[0] * s + a[1]) * s + a[2]) * s + a[3]) * s + a[4]) * s + a[5]) * r /
         (((((b[0] * s + b[1]) * s + b[2]) * s + b[3]) * s + b[4]) * s + 1.0);
}

// Root of an increasing function g on [lo, hi] with g(lo) <= 0 <= g(hi).
// Newton steps from x0, falling back to bisection whenever a step leaves the
// current bracket.
template <typename Fn>
double bracketed_newton(Fn&& value_and_slope, double lo, double hi, double x0) {
  double x = x0;
  if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);
  for (int i = 0; i < 400; ++i) {
    const auto [g, slope] = value_and_slope(x);
    if (g == 0.0) return x;
    if (g < 0.0) {
      lo = x;
    } else {
      hi = x;
    }
    double next = (slope > 0.0 && std::isfinite(slope)) ? x - g / slope : lo - 1.0;
    if (!(next > lo && next < hi)) {
      next = 0.5 * (lo + hi);
    }
    if (std::abs(next - x) <= 4.0 * kEpsilon * std::max(1.0, std::abs(x)) ||
        hi - lo <= 4.0 * kEpsilon * std::max(1.0, std::abs(x))) {
      return next;
    }
    x = next;
  }
  return x;
}

}  // namespace

Probability::Probability(double value) : value_(value) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw DomainError("probability must lie in [0, 1], got " + std::to_string(value));
  }
}

DegreesOfFreedom::DegreesOfFreedom(double value) : value_(value) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw DomainError("degrees of freedom must be positive, got " + std::to_string(value));
  }
}

double std_normal_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

double std_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double std_normal_sf(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double std_normal_quantile(Probability alpha) {
  const double a = alpha.value();
  require_open_unit(a, "std_normal_quantile");
  if (a == 0.5) return 0.0;
  if (a > 0.5) {
    // 1 - a is exact here.
    return -std_normal_quantile(Probability(1.0 - a));
  }
  // Solve log(sf(z)) = log(a) on z >= 0; the log keeps Newton well scaled in
  // the far tail.
  const double log_target = std::log(a);
  auto g = [&](double z) {
    const double sf = std_normal_sf(z);
    return std::pair{log_target - std::log(sf), std_normal_pdf(z) / sf};
  };
  return bracketed_newton(g, 0.0, 40.0, -acklam_lower_quantile(a));
}

double regularized_gamma_p(double a, double x) {
  if (!(a > 0.0)) throw DomainError("incomplete gamma: shape must be positive");
  if (std::isnan(x)) return x;
  if (x <= 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  if (x < a + 1.0) return gamma_p_series(a, x);
  return 1.0 - gamma_q_continued_fraction(a, x);
}

double regularized_gamma_q(double a, double x) {
  if (!(a > 0.0)) throw DomainError("incomplete gamma: shape must be positive");
  if (std::isnan(x)) return x;
  if (x <= 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_continued_fraction(a, x);
}

double chisq_pdf(double x, DegreesOfFreedom df) {
  const double a = 0.5 * df.value();
  if (x < 0.0) return 0.0;
  if (x == 0.0) {
    if (a < 1.0) return std::numeric_limits<double>::infinity();
    return a == 1.0 ? 0.5 : 0.0;
  }
  return std::exp(log_gamma_prefactor(a, 0.5 * x)) / x;
}

double chisq_cdf(double x, DegreesOfFreedom df) {
  return regularized_gamma_p(0.5 * df.value(), 0.5 * x);
}

double chisq_sf(double x, DegreesOfFreedom df) {
  return regularized_gamma_q(0.5 * df.value(), 0.5 * x);
}

double chisq_quantile(Probability alpha, DegreesOfFreedom df) {
  const double a = alpha.value();
  require_open_unit(a, "chisq_quantile");
  const double k = df.value();

  // Wilson-Hilferty starting point.
  const double h = 2.0 / (9.0 * k);
  const double cube = 1.0 - h + std_normal_quantile(alpha) * std::sqrt(h);
  double x0 = k * cube * cube * cube;
  if (!(x0 > 0.0)) x0 = 0.5 * k;

  double hi = std::max(x0, k) + 1.0;
  while (chisq_sf(hi, df) > a) {
    hi *= 2.0;
  }

  // Work with whichever tail is smaller so the target keeps full precision.
  if (a < 0.5) {
    const double log_target = std::log(a);
    auto g = [&](double x) {
      const double sf = chisq_sf(x, df);
      return std::pair{log_target - std::log(sf), chisq_pdf(x, df) / sf};
    };
    return bracketed_newton(g, 0.0, hi, x0);
  }
  const double log_target = std::log1p(-a);
  auto g = [&](double x) {
    const double cdf = chisq_cdf(x, df);
    if (cdf == 0.0) return std::pair{-std::numeric_limits<double>::infinity(), 0.0};
    return std::pair{std::log(cdf) - log_target, chisq_pdf(x, df) / cdf};
  };
  return bracketed_newton(g, 0.0, hi, x0);
}

}  // namespace indep
