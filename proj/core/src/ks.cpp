#include "indep/ks.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace indep {

namespace {

std::vector<double> sorted_finite(std::span<const double> values) {
  std::vector<double> out;
  out.reserve(values.size());
  for (double v : values) {
    if (!std::isnan(v)) out.push_back(v);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

double ks_distance(std::span<const double> samples, const std::function<double(double)>& cdf) {
  const std::vector<double> x = sorted_finite(samples);
  if (x.empty()) return 1.0;
  const double count = static_cast<double>(x.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = cdf(x[i]);
    worst = std::max({worst, static_cast<double>(i + 1) / count - f, f - static_cast<double>(i) / count});
  }
  return worst;
}

double ks_distance(std::span<const double> a, std::span<const double> b) {
  const std::vector<double> x = sorted_finite(a);
  const std::vector<double> y = sorted_finite(b);
  if (x.empty() || y.empty()) return 1.0;
  const double nx = static_cast<double>(x.size());
  const double ny = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double worst = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] <= v) ++i;
    while (j < y.size() && y[j] <= v) ++j;
    worst = std::max(worst, std::abs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
  }
  return worst;
}

}  // namespace indep
