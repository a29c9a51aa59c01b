#include <gtest/gtest.h>

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>

#include "indep/error.hpp"
#include "indep/oracle.hpp"
#include "indep/statistics.hpp"

using namespace indep;
using boost::multiprecision::cpp_rational;

namespace {

cpp_rational q(long long v) { return cpp_rational(v); }

cpp_rational power(const cpp_rational& x, int k) {
  cpp_rational out = 1;
  for (int i = 0; i < k; ++i) out *= x;
  return out;
}

struct ExactSphere {
  cpp_rational c1, c2, c3, c4;
};

ExactSphere exact_sphere(long long n) {
  return {q(1) / (n - 1), q(3) / ((n - 1) * (n + 1)), q(15) / ((n - 1) * (n + 1) * (n + 3)),
          q(105) / ((n - 1) * (n + 1) * (n + 3) * (n + 5))};
}

void expect_matches(double value, const cpp_rational& exact, const char* what, long long n) {
  const double reference = static_cast<double>(exact);
  if (reference == 0.0) {
    EXPECT_EQ(value, 0.0) << what << " n=" << n;
  } else {
    EXPECT_LE(std::abs(value - reference) / std::abs(reference), 1e-12) << what << " n=" << n;
  }
}

}  // namespace

TEST(MaoMoments, KnownValuesAtTwelve) {
  EXPECT_DOUBLE_EQ(mao_centered_moment({MomentKind::all_equal, 12}), 981.0 / 4096.0);
  EXPECT_DOUBLE_EQ(mao_centered_moment_as_printed({MomentKind::all_equal, 12}), 15.328125);
  EXPECT_DOUBLE_EQ(mao_centered_moment_as_printed({MomentKind::two_pairs, 12}), 0.140625);
  EXPECT_DOUBLE_EQ(mao_centered_moment({MomentKind::two_pairs, 12}), 0.140625 / 64.0);
  EXPECT_EQ(mao_centered_moment({MomentKind::otherwise, 12}), 0.0);
  EXPECT_EQ(mao_centered_moment({MomentKind::otherwise, 3}), 0.0);
}

TEST(MaoMoments, DomainChecks) {
  EXPECT_THROW(mao_centered_moment({MomentKind::all_equal, 10}), DomainError);
  EXPECT_NO_THROW(mao_centered_moment({MomentKind::all_equal, 11}));
  EXPECT_THROW(mao_centered_moment({MomentKind::two_pairs, 6}), DomainError);
  EXPECT_THROW(mao_term_variance(6), DomainError);
}

TEST(MaoMoments, QuotedFormOffByExactlyNMinusFourSquared) {
  for (std::size_t n : {11u, 12u, 20u, 50u, 100u}) {
    for (MomentKind k : {MomentKind::all_equal, MomentKind::two_pairs}) {
      const double ratio = mao_centered_moment_as_printed({k, n}) / mao_centered_moment({k, n});
      EXPECT_NEAR(ratio, (n - 4.0) * (n - 4.0), 1e-10 * ratio);
    }
  }
}

TEST(MaoMoments, TwoPairsIsSquaredTermVariance) {
  for (std::size_t n : {7u, 11u, 40u}) {
    const double v = mao_term_variance(n);
    EXPECT_NEAR(mao_centered_moment({MomentKind::two_pairs, n}), v * v, 1e-15);
    EXPECT_NEAR(v * 0.5 * 6 * 5, mao_sigma_sq(n, 6), 1e-14);
  }
}

TEST(ExactRational, AllFormulas) {
  for (long long n : {11, 12, 20, 50, 100}) {
    const auto s = exact_sphere(n);
    const auto c = sphere_r2_moments(static_cast<std::size_t>(n));
    expect_matches(c.c1, s.c1, "c1", n);
    expect_matches(c.c2, s.c2, "c2", n);
    expect_matches(c.c3, s.c3, "c3", n);
    expect_matches(c.c4, s.c4, "c4", n);

    const cpp_rational m = s.c1;
    const auto d = schott_centered_moments(static_cast<std::size_t>(n));
    expect_matches(d.d2, q(2 * (n - 2)) / ((n - 1) * (n - 1) * (n + 1)), "d2", n);
    expect_matches(d.d2, s.c2 - m * m, "d2 expansion", n);
    expect_matches(d.d3, s.c3 - 3 * s.c2 * m + 2 * power(m, 3), "d3", n);
    expect_matches(d.d4, s.c4 - 4 * s.c3 * m + 6 * s.c2 * m * m - 3 * power(m, 4), "d4", n);

    const cpp_rational nm4 = n - 4;
    expect_matches(mao_term_variance(n), q(2 * (n - 3)) / (nm4 * nm4 * (n - 6)), "variance", n);
    expect_matches(mao_centered_moment({MomentKind::all_equal, static_cast<std::size_t>(n)}),
                   q(12 * (n - 3) * (5 * n * n - 27 * n + 40)) /
                       (power(nm4, 4) * (n - 6) * (n - 8) * (n - 10)),
                   "all_equal", n);
    expect_matches(mao_centered_moment({MomentKind::two_pairs, static_cast<std::size_t>(n)}),
                   q(4 * (n - 3) * (n - 3)) / (power(nm4, 4) * (n - 6) * (n - 6)), "two_pairs",
                   n);
  }
}

TEST(SphereMoments, CauchySchwarzAndOrders) {
  for (std::size_t n = 3; n <= 100; ++n) {
    const auto c = sphere_r2_moments(n);
    EXPECT_GE(c.c2, c.c1 * c.c1);
    EXPECT_GE(c.c4, c.c2 * c.c2);
  }
  const auto c10 = sphere_r2_moments(10);
  EXPECT_DOUBLE_EQ(c10.c1, 1.0 / 9.0);
  EXPECT_DOUBLE_EQ(c10.c2, 1.0 / 33.0);
  EXPECT_DOUBLE_EQ(schott_centered_moments(10).d2, 16.0 / 891.0);
  for (std::size_t n = 11; n <= 200; ++n) {
    const auto d = schott_centered_moments(n);
    const double nn = static_cast<double>(n);
    EXPECT_LT(std::abs(d.d3) * nn * nn * nn, 10.0) << n;
    EXPECT_LT(std::abs(d.d4) * nn * nn * nn * nn, 70.0) << n;
  }
  // r^2 behaves like chi2_1 / n, whose third and fourth central moments are 8 and 60.
  const auto far = schott_centered_moments(100000);
  EXPECT_NEAR(far.d3 * 1e15, 8.0, 0.01);
  EXPECT_NEAR(far.d4 * 1e20, 60.0, 0.1);
}

TEST(CrossMoment, Values) {
  EXPECT_EQ(schott_cross_moment(false, 10), 0.0);
  EXPECT_DOUBLE_EQ(schott_cross_moment(true, 10), 16.0 / 891.0);
}

TEST(SecondOrderCorrection, ReducesToDimensionOnly) {
  for (std::size_t n : {10u, 25u, 300u}) {
    for (std::size_t p : {2u, 7u, 150u}) {
      const double pd = static_cast<double>(p);
      EXPECT_NEAR(mao_second_order_correction(n, p), -2.0 * (2 * pd - 1) / (3 * pd * (pd - 1)),
                  1e-13);
    }
  }
}

TEST(Identities, NamesAndDomains) {
  EXPECT_EQ(identity_name(MomentIdentity::mao_fourth_all_equal), "E[rhat^4] (all equal)");
  EXPECT_EQ(identity_min_n(MomentIdentity::mao_fourth_all_equal), 11u);
  EXPECT_THROW(identity_analytic_value(MomentIdentity::mao_fourth_all_equal, 10), DomainError);
  EXPECT_THROW(verify_moment_by_simulation(MomentIdentity::r2_mean, 10, 0, 1), DomainError);
  MonteCarloOptions few;
  few.vectors_per_draw = 3;
  EXPECT_THROW(verify_moment_by_simulation(MomentIdentity::r2_mean, 10, 10, 1, few), DomainError);
}

TEST(MonteCarlo, MeanOfSquareAtTen) {
  const auto check = verify_moment_by_simulation(MomentIdentity::r2_mean, 10, 100000, 3);
  EXPECT_DOUBLE_EQ(check.analytic, 1.0 / 9.0);
  EXPECT_LT(check.relative_error, 0.01);
  EXPECT_GT(check.mc_standard_error, 0.0);
}

TEST(MonteCarlo, CenteredMaoTermHasMeanZero) {
  const auto check = verify_moment_by_simulation(MomentIdentity::mao_mean_zero, 20, 100000, 4);
  EXPECT_LE(std::abs(check.empirical), 3.0 * check.mc_standard_error);
}

TEST(MonteCarlo, CrossMomentsVanish) {
  for (auto id : {MomentIdentity::schott_cross_disjoint, MomentIdentity::schott_cross_shared}) {
    const auto check = verify_moment_by_simulation(id, 10, 100000, 5);
    EXPECT_LE(std::abs(check.empirical), 3.0 * check.mc_standard_error) << identity_name(id);
  }
}

TEST(MonteCarlo, TermVarianceAndFourthMoments) {
  const auto variance = verify_moment_by_simulation(MomentIdentity::mao_term_variance, 20, 100000, 6);
  EXPECT_LT(variance.relative_error, 0.03);
  const auto pairs = verify_moment_by_simulation(MomentIdentity::mao_fourth_two_pairs, 20, 100000, 7);
  EXPECT_LT(pairs.relative_error, 0.10);
  // The literal fourth-moment expression is (n-4)^2 = 256 times too large.
  const double quoted = mao_centered_moment_as_printed({MomentKind::two_pairs, 20});
  EXPECT_GT(std::abs(pairs.empirical - quoted) / quoted, 0.9);
}

TEST(MonteCarlo, ThreadInvariant) {
  MonteCarloOptions one, many;
  many.threads = 4;
  const auto a = verify_moment_by_simulation(MomentIdentity::schott_d3, 10, 5000, 8, one);
  const auto b = verify_moment_by_simulation(MomentIdentity::schott_d3, 10, 5000, 8, many);
  EXPECT_EQ(a.empirical, b.empirical);
  EXPECT_EQ(a.mc_standard_error, b.mc_standard_error);
}

TEST(ValidationSuite, CoversEveryIdentityWithTolerances) {
  const auto suite = default_validation_suite();
  EXPECT_EQ(suite.size(), 13u);
  for (const auto& c : suite) {
    EXPECT_GE(c.n, identity_min_n(c.identity));
    EXPECT_GT(c.tolerance, 0.0);
  }
  MomentCheck check{MomentIdentity::r2_mean, 10, 100, 1.0, 1.015, 0.01, 0.015};
  EXPECT_FALSE(passes({MomentIdentity::r2_mean, 10, ToleranceKind::relative, 0.01}, check));
  EXPECT_TRUE(passes({MomentIdentity::r2_mean, 10, ToleranceKind::standard_errors, 3.0}, check));
}
