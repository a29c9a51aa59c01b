#pragma once

#include <functional>
#include <span>

namespace indep {

/// sup_x |F_n(x) - F(x)| for the empirical CDF F_n of `samples` (NaNs are
/// ignored). Returns 1 when no finite samples remain.
double ks_distance(std::span<const double> samples, const std::function<double(double)>& cdf);

/// sup_x |F_a(x) - F_b(x)| between two empirical CDFs.
double ks_distance(std::span<const double> a, std::span<const double> b);

}  // namespace indep
