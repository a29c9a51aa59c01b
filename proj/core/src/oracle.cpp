#include "indep/oracle.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "indep/correlation.hpp"
#include "indep/error.hpp"
#include "indep/random.hpp"
#include "parallel.hpp"

namespace indep {

namespace {

void require_n(std::size_t n, std::size_t minimum, const char* what) {
  if (n < minimum) {
    throw DomainError(std::string(what) + " needs n >= " + std::to_string(minimum) + ", got " +
                      std::to_string(n));
  }
}

double fourth_moment_numerator(MomentCase c) {
  const double n = static_cast<double>(c.n);
  switch (c.kind) {
    case MomentKind::all_equal:
      require_n(c.n, 11, "all_equal fourth moment");
      return 12.0 * (n - 3.0) * (5.0 * n * n - 27.0 * n + 40.0) /
             ((n - 6.0) * (n - 8.0) * (n - 10.0));
    case MomentKind::two_pairs:
      require_n(c.n, 7, "two_pairs fourth moment");
      return 4.0 * (n - 3.0) * (n - 3.0) / ((n - 6.0) * (n - 6.0));
    case MomentKind::otherwise:
      return 0.0;
  }
  return 0.0;
}

// Per-draw estimate of an identity: the average over every qualifying index
// tuple among the sphere vectors of one draw.
double draw_average(MomentIdentity identity, const CorrelationSummary& corr) {
  const std::size_t n = corr.n();
  const std::size_t p = corr.p();
  const auto r = corr.offdiag();
  const double m = 1.0 / static_cast<double>(n - 1);
  const double mao_mean = 1.0 / static_cast<double>(n - 4);
  const auto rhat = [&](double x) { return x * x / (1.0 - x * x) - mao_mean; };

  auto average = [&](auto&& f) {
    double sum = 0.0;
    for (double x : r) sum += f(x);
    return sum / static_cast<double>(r.size());
  };

  // Sums over ordered pairs of distinct edges that share a vertex, and over
  // ordered pairs of disjoint edges, of v_e v_f.
  auto edge_pair_sums = [&](auto&& f, double& shared, double& disjoint) {
    std::vector<double> v(r.size());
    for (std::size_t k = 0; k < r.size(); ++k) v[k] = f(r[k]);
    double total = 0.0, total_sq = 0.0;
    for (double x : v) {
      total += x;
      total_sq += x * x;
    }
    shared = 0.0;
    for (std::size_t vertex = 0; vertex < p; ++vertex) {
      double s = 0.0, s2 = 0.0;
      for (std::size_t other = 0; other < p; ++other) {
        if (other == vertex) continue;
        const double x = v[vertex > other ? pair_index(vertex, other) : pair_index(other, vertex)];
        s += x;
        s2 += x * x;
      }
      shared += s * s - s2;
    }
    disjoint = (total * total - total_sq) - shared;
  };
  const double edges = static_cast<double>(r.size());
  const double shared_count = static_cast<double>(p) * static_cast<double>(p - 1) *
                              static_cast<double>(p - 2);
  const double disjoint_count = edges * (edges - 1.0) - shared_count;

  switch (identity) {
    case MomentIdentity::r2_mean: return average([](double x) { return x * x; });
    case MomentIdentity::r4_mean: return average([](double x) { return std::pow(x, 4); });
    case MomentIdentity::r6_mean: return average([](double x) { return std::pow(x, 6); });
    case MomentIdentity::r8_mean: return average([](double x) { return std::pow(x, 8); });
    case MomentIdentity::schott_d2:
      return average([&](double x) { return std::pow(x * x - m, 2); });
    case MomentIdentity::schott_d3:
      return average([&](double x) { return std::pow(x * x - m, 3); });
    case MomentIdentity::schott_d4:
      return average([&](double x) { return std::pow(x * x - m, 4); });
    case MomentIdentity::schott_cross_disjoint: {
      double shared, disjoint;
      edge_pair_sums([&](double x) { return x * x - m; }, shared, disjoint);
      return disjoint / disjoint_count;
    }
    case MomentIdentity::schott_cross_shared: {
      double shared, disjoint;
      edge_pair_sums([&](double x) { return x * x - m; }, shared, disjoint);
      return shared / shared_count;
    }
    case MomentIdentity::mao_mean_zero: return average(rhat);
    case MomentIdentity::mao_term_variance:
      return average([&](double x) { return std::pow(rhat(x), 2); });
    case MomentIdentity::mao_fourth_all_equal:
      return average([&](double x) { return std::pow(rhat(x), 4); });
    case MomentIdentity::mao_fourth_two_pairs: {
      double shared, disjoint;
      edge_pair_sums([&](double x) { return std::pow(rhat(x), 2); }, shared, disjoint);
      return shared / shared_count;
    }
  }
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

double mao_centered_moment(MomentCase c) {
  const double nm4 = static_cast<double>(c.n) - 4.0;
  return fourth_moment_numerator(c) / (nm4 * nm4 * nm4 * nm4);
}

double mao_centered_moment_as_printed(MomentCase c) {
  const double nm4 = static_cast<double>(c.n) - 4.0;
  return fourth_moment_numerator(c) / (nm4 * nm4);
}

double mao_term_variance(std::size_t n) {
  require_n(n, 7, "Mao term variance");
  const double nd = static_cast<double>(n);
  return 2.0 * (nd - 3.0) / ((nd - 4.0) * (nd - 4.0) * (nd - 6.0));
}

SphereMoments sphere_r2_moments(std::size_t n) {
  require_n(n, 3, "sphere moments");
  const double nd = static_cast<double>(n);
  const double c1 = 1.0 / (nd - 1.0);
  const double c2 = 3.0 * c1 / (nd + 1.0);
  const double c3 = 5.0 * c2 / (nd + 3.0);
  const double c4 = 7.0 * c3 / (nd + 5.0);
  return {c1, c2, c3, c4};
}

SchottCenteredMoments schott_centered_moments(std::size_t n) {
  const SphereMoments c = sphere_r2_moments(n);
  const double m = c.c1;
  const double m2 = m * m;
  const double nd = static_cast<double>(n);
  SchottCenteredMoments d;
  d.d2 = 2.0 * (nd - 2.0) / ((nd - 1.0) * (nd - 1.0) * (nd + 1.0));
  d.d3 = c.c3 - 3.0 * c.c2 * m + 3.0 * c.c1 * m2 - m2 * m;
  d.d4 = c.c4 - 4.0 * c.c3 * m + 6.0 * c.c2 * m2 - 4.0 * c.c1 * m2 * m + m2 * m2;
  return d;
}

double schott_cross_moment(bool same_pair, std::size_t n) {
  return same_pair ? schott_centered_moments(n).d2 : 0.0;
}

double mao_second_order_correction(std::size_t n, std::size_t p) {
  require_n(n, 7, "Mao second-order correction");
  const double nd = static_cast<double>(n);
  const double pd = static_cast<double>(p);
  const double pp = pd * (pd - 1.0);
  const double nm4 = nd - 4.0;
  const double nm6 = nd - 6.0;
  const double sigma_sq = pp * (nd - 3.0) / (nm4 * nm4 * nm6);
  return -2.0 * (nd - 3.0) * (nd - 3.0) * pp * (2.0 * pd - 1.0) /
         (3.0 * sigma_sq * sigma_sq * nm4 * nm4 * nm4 * nm4 * nm6 * nm6);
}

std::string_view identity_name(MomentIdentity identity) {
  switch (identity) {
    case MomentIdentity::r2_mean: return "E[r^2]=c1";
    case MomentIdentity::r4_mean: return "E[r^4]=c2";
    case MomentIdentity::r6_mean: return "E[r^6]=c3";
    case MomentIdentity::r8_mean: return "E[r^8]=c4";
    case MomentIdentity::schott_d2: return "E[q^2]=d2";
    case MomentIdentity::schott_d3: return "E[q^3]=d3";
    case MomentIdentity::schott_d4: return "E[q^4]=d4";
    case MomentIdentity::schott_cross_disjoint: return "E[q_ij q_st]=0 (disjoint)";
    case MomentIdentity::schott_cross_shared: return "E[q_ij q_it]=0 (shared index)";
    case MomentIdentity::mao_mean_zero: return "E[rhat]=0";
    case MomentIdentity::mao_term_variance: return "E[rhat^2]=var";
    case MomentIdentity::mao_fourth_all_equal: return "E[rhat^4] (all equal)";
    case MomentIdentity::mao_fourth_two_pairs: return "E[rhat_j^2 rhat_k^2] (two pairs)";
  }
  return "unknown";
}

std::size_t identity_min_n(MomentIdentity identity) {
  switch (identity) {
    case MomentIdentity::mao_mean_zero: return 5;
    case MomentIdentity::mao_term_variance:
    case MomentIdentity::mao_fourth_two_pairs: return 7;
    case MomentIdentity::mao_fourth_all_equal: return 11;
    default: return 3;
  }
}

double identity_analytic_value(MomentIdentity identity, std::size_t n) {
  require_n(n, identity_min_n(identity), std::string(identity_name(identity)).c_str());
  switch (identity) {
    case MomentIdentity::r2_mean: return sphere_r2_moments(n).c1;
    case MomentIdentity::r4_mean: return sphere_r2_moments(n).c2;
    case MomentIdentity::r6_mean: return sphere_r2_moments(n).c3;
    case MomentIdentity::r8_mean: return sphere_r2_moments(n).c4;
    case MomentIdentity::schott_d2: return schott_centered_moments(n).d2;
    case MomentIdentity::schott_d3: return schott_centered_moments(n).d3;
    case MomentIdentity::schott_d4: return schott_centered_moments(n).d4;
    case MomentIdentity::schott_cross_disjoint:
    case MomentIdentity::schott_cross_shared: return schott_cross_moment(false, n);
    case MomentIdentity::mao_mean_zero: return 0.0;
    case MomentIdentity::mao_term_variance: return mao_term_variance(n);
    case MomentIdentity::mao_fourth_all_equal:
      return mao_centered_moment({MomentKind::all_equal, n});
    case MomentIdentity::mao_fourth_two_pairs:
      return mao_centered_moment({MomentKind::two_pairs, n});
  }
  return std::numeric_limits<double>::quiet_NaN();
}

MomentCheck verify_moment_by_simulation(MomentIdentity identity, std::size_t n,
                                        std::uint64_t draws, std::uint64_t seed,
                                        const MonteCarloOptions& options) {
  const double analytic = identity_analytic_value(identity, n);
  if (draws == 0) throw DomainError("need at least one draw");
  if (options.vectors_per_draw < 4) throw DomainError("need at least 4 vectors per draw");

  // Per-draw averages are stored by draw index and reduced serially, so the
  // result is bit-identical for any thread count.
  std::vector<double> per_draw(draws);
  struct Unused {};
  detail::for_each_replication<Unused>(
      draws, options.threads, [] { return Unused{}; },
      [&](std::uint64_t index, Unused&) {
        RandomStream rng = RandomStream::substream(seed, index);
        per_draw[index] =
            draw_average(identity, sample_null_correlations(n, options.vectors_per_draw, rng));
      });

  const double count = static_cast<double>(draws);
  const double mean = std::accumulate(per_draw.begin(), per_draw.end(), 0.0) / count;
  double ss = 0.0;
  for (double x : per_draw) ss += (x - mean) * (x - mean);
  const double se = draws > 1 ? std::sqrt(ss / (count - 1.0) / count) : 0.0;

  MomentCheck check{identity, n, draws, analytic, mean, se, 0.0};
  if (analytic != 0.0) {
    check.relative_error = std::abs(mean - analytic) / std::abs(analytic);
  } else {
    check.relative_error = mean == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  }
  return check;
}

std::vector<ValidationCase> default_validation_suite() {
  using I = MomentIdentity;
  using K = ToleranceKind;
  // Second moments are checked to 1-2%, higher moments more loosely: the
  // variance of an r^(2k) estimate grows quickly with k, and rhat^4 at n = 20
  // has only just enough finite moments for its estimate to have a variance.
  return {
      {I::r2_mean, 10, K::relative, 0.01},
      {I::r4_mean, 10, K::relative, 0.02},
      {I::r6_mean, 10, K::relative, 0.05},
      {I::r8_mean, 10, K::relative, 0.10},
      {I::schott_d2, 10, K::relative, 0.02},
      {I::schott_d3, 10, K::relative, 0.05},
      {I::schott_d4, 10, K::relative, 0.10},
      {I::schott_cross_disjoint, 10, K::standard_errors, 3.0},
      {I::schott_cross_shared, 10, K::standard_errors, 3.0},
      {I::mao_mean_zero, 20, K::standard_errors, 3.0},
      {I::mao_term_variance, 20, K::relative, 0.02},
      {I::mao_fourth_all_equal, 20, K::relative, 0.10},
      {I::mao_fourth_two_pairs, 20, K::relative, 0.10},
  };
}

bool passes(const ValidationCase& c, const MomentCheck& check) {
  if (c.kind == ToleranceKind::relative) return check.relative_error <= c.tolerance;
  return std::abs(check.empirical - check.analytic) <= c.tolerance * check.mc_standard_error;
}

}  // namespace indep
