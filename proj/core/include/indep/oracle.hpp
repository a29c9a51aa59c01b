#pragma once

// Exact finite-sample null moments of sample correlations, and Monte Carlo
// checks of them over the sphere sampler.
//
// Under independence, r_ij = w_i' w_j with w_j uniform on the unit sphere in
// R^(n-1), so r^2 ~ Beta(1/2, (n-2)/2) and r^2/(1-r^2) is beta-prime with the
// same parameters. Distinct r_ij are pairwise independent.

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

namespace indep {

/// Index pattern of E(rhat_{l j1} rhat_{l j2} rhat_{l j3} rhat_{l j4}) where
/// rhat = r^2/(1-r^2) - 1/(n-4).
enum class MomentKind {
  all_equal,  // j1 = j2 = j3 = j4
  two_pairs,  // {j1..j4} is two distinct pairs
  otherwise,
};

struct MomentCase {
  MomentKind kind;
  std::size_t n;
};

/// Exact value: all_equal 12(n-3)(5n^2-27n+40) / ((n-4)^4 (n-6)(n-8)(n-10)),
/// two_pairs 4(n-3)^2 / ((n-4)^4 (n-6)^2), otherwise 0.
/// Throws DomainError when n is too small for the case (all_equal needs
/// n >= 11, two_pairs n >= 7).
double mao_centered_moment(MomentCase c);

/// The same fourth moments with (n-4)^2 in place of (n-4)^4, as they are
/// usually quoted. Exceeds the true moment by exactly (n-4)^2; kept so the
/// discrepancy stays visible and testable.
double mao_centered_moment_as_printed(MomentCase c);

/// Var(rhat) = 2(n-3) / ((n-4)^2 (n-6)); n >= 7.
double mao_term_variance(std::size_t n);

/// E(r^2), ..., E(r^8) under the null.
struct SphereMoments {
  double c1, c2, c3, c4;
};
/// n >= 3.
SphereMoments sphere_r2_moments(std::size_t n);

/// Central moments E((r^2 - 1/(n-1))^k) for k = 2, 3, 4, from the c_r by
/// binomial expansion. d2 = 2(n-2) / ((n-1)^2 (n+1)).
struct SchottCenteredMoments {
  double d2, d3, d4;
};
SchottCenteredMoments schott_centered_moments(std::size_t n);

/// E((r_ij^2 - 1/(n-1)) (r_st^2 - 1/(n-1))): d2 for the same pair, 0 otherwise.
double schott_cross_moment(bool same_pair, std::size_t n);

/// -2 sigma^-4 (n-3)^2 p(p-1)(2p-1) / (3 (n-4)^4 (n-6)^2), the p^-1 order
/// correction in E(sum of squared normalized martingale differences) for the
/// Mao statistic. Quoted, not derived here; exposed for reference.
double mao_second_order_correction(std::size_t n, std::size_t p);

enum class MomentIdentity {
  r2_mean,                // E r^2 = c1
  r4_mean,                // E r^4 = c2
  r6_mean,                // E r^6 = c3
  r8_mean,                // E r^8 = c4
  schott_d2,              // E q^2, q = r^2 - 1/(n-1)
  schott_d3,              // E q^3
  schott_d4,              // E q^4
  schott_cross_disjoint,  // E q_ij q_st, {i,j} and {s,t} disjoint
  schott_cross_shared,    // E q_ij q_it, j != t
  mao_mean_zero,          // E rhat = 0
  mao_term_variance,      // E rhat^2
  mao_fourth_all_equal,   // E rhat^4
  mao_fourth_two_pairs,   // E rhat_lj^2 rhat_lk^2, j != k
};

std::string_view identity_name(MomentIdentity identity);
/// Smallest n for which the identity's moment exists.
std::size_t identity_min_n(MomentIdentity identity);
double identity_analytic_value(MomentIdentity identity, std::size_t n);

struct MonteCarloOptions {
  /// Sphere vectors per draw. Every qualifying index tuple within a draw
  /// contributes, and the per-draw average is one i.i.d. observation.
  std::size_t vectors_per_draw = 12;
  unsigned threads = 1;
};

struct MomentCheck {
  MomentIdentity identity;
  std::size_t n;
  std::uint64_t draws;
  double analytic;
  double empirical;
  double mc_standard_error;
  /// |empirical - analytic| / |analytic|; infinite when analytic is 0 and the
  /// estimate is not.
  double relative_error;
};

/// Throws DomainError if n < identity_min_n(identity), draws == 0 or
/// vectors_per_draw < 4.
MomentCheck verify_moment_by_simulation(MomentIdentity identity, std::size_t n,
                                        std::uint64_t draws, std::uint64_t seed,
                                        const MonteCarloOptions& options = {});

/// How a check is judged: relative error against a nonzero analytic value,
/// or distance from zero in Monte Carlo standard errors.
enum class ToleranceKind { relative, standard_errors };

struct ValidationCase {
  MomentIdentity identity;
  std::size_t n;
  ToleranceKind kind;
  double tolerance;
};

/// The identity suite with its documented tolerances.
std::vector<ValidationCase> default_validation_suite();

bool passes(const ValidationCase& c, const MomentCheck& check);

}  // namespace indep
