#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "hybtail/errors.hpp"

namespace hybtail {

/// Sorted sample with the right-continuous step evaluator H_n.
struct EmpiricalCdf {
  std::vector<double> sorted;

  std::size_t size() const { return sorted.size(); }
  double min() const { return sorted.front(); }
  double max() const { return sorted.back(); }

  /// H_n(t) = #{x_i <= t} / n.
  double operator()(double t) const {
    const auto it = std::upper_bound(sorted.begin(), sorted.end(), t);
    return static_cast<double>(it - sorted.begin()) / static_cast<double>(sorted.size());
  }

  /// Order statistic at index ceil(p*n), the inverse-cdf convention.
  double quantile(double p) const {
    if (!(p > 0.0 && p <= 1.0)) throw DomainError("quantile: p must lie in (0,1]");
    const auto n = static_cast<double>(sorted.size());
    auto idx = static_cast<std::size_t>(std::ceil(p * n));
    idx = std::clamp<std::size_t>(idx, 1, sorted.size());
    return sorted[idx - 1];
  }
};

inline EmpiricalCdf empirical_cdf(std::vector<double> data) {
  if (data.empty()) throw EmptyData("empirical_cdf: empty sample");
  for (double v : data)
    if (!std::isfinite(v)) throw DomainError("empirical_cdf: non-finite value");
  std::sort(data.begin(), data.end());
  return EmpiricalCdf{std::move(data)};
}

/// Synthetic evaluation grid with a logarithmic step between the sample
/// extremes: y_j = min + (max-min) * log10(1 + 9(j-1)/(m-1)).
struct SyntheticGrid {
  std::vector<double> points;
  double data_min = 0.0;
  double data_max = 0.0;
};

inline SyntheticGrid synthetic_grid(double lo, double hi, std::size_t m) {
  if (m < 2) throw DomainError("synthetic_grid: m must be at least 2");
  if (!(hi > lo)) throw DegenerateRange("synthetic_grid: max must exceed min");
  SyntheticGrid g;
  g.data_min = lo;
  g.data_max = hi;
  g.points.resize(m);
  const double range = hi - lo;
  for (std::size_t j = 0; j < m; ++j) {
    const double t = static_cast<double>(j) / static_cast<double>(m - 1);
    g.points[j] = lo + range * std::log10(1.0 + 9.0 * t);
  }
  g.points.front() = lo;
  g.points.back() = hi;
  return g;
}

inline SyntheticGrid synthetic_grid(const EmpiricalCdf& ecdf, std::size_t m) {
  return synthetic_grid(ecdf.min(), ecdf.max(), m);
}

inline SyntheticGrid synthetic_grid(const std::vector<double>& data, std::size_t m) {
  if (data.empty()) throw EmptyData("synthetic_grid: empty sample");
  auto [lo, hi] = std::minmax_element(data.begin(), data.end());
  return synthetic_grid(*lo, *hi, m);
}

enum class BandwidthRule { FreedmanDiaconis, Scott, SquareRoot };

namespace detail {

/// Most frequent exact value, smallest on ties. Fallback for histograms whose
/// bandwidth rule degenerates (e.g. zero IQR).
inline double exact_mode(const std::vector<double>& sorted) {
  double best = sorted.front();
  std::size_t best_count = 0;
  std::size_t i = 0;
  while (i < sorted.size()) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    if (j - i > best_count) {
      best_count = j - i;
      best = sorted[i];
    }
    i = j;
  }
  return best;
}

}  // namespace detail

/// Center of the highest-count histogram bin; ties break toward the smaller
/// center. The bin width follows the configured rule.
inline double estimate_mode(const std::vector<double>& data,
                            BandwidthRule rule = BandwidthRule::FreedmanDiaconis) {
  if (data.empty()) throw EmptyData("estimate_mode: empty sample");
  std::vector<double> s(data);
  std::sort(s.begin(), s.end());
  const double n = static_cast<double>(s.size());
  const double lo = s.front(), hi = s.back();
  const double range = hi - lo;
  if (range <= 0.0) return lo;

  EmpiricalCdf ecdf{std::move(s)};
  double width = 0.0;
  switch (rule) {
    case BandwidthRule::FreedmanDiaconis: {
      const double iqr = ecdf.quantile(0.75) - ecdf.quantile(0.25);
      width = 2.0 * iqr / std::cbrt(n);
      break;
    }
    case BandwidthRule::Scott: {
      double mean = 0.0;
      for (double v : ecdf.sorted) mean += v;
      mean /= n;
      double var = 0.0;
      for (double v : ecdf.sorted) var += (v - mean) * (v - mean);
      var /= (n - 1.0 > 0.0 ? n - 1.0 : 1.0);
      width = 3.49 * std::sqrt(var) / std::cbrt(n);
      break;
    }
    case BandwidthRule::SquareRoot:
      width = range / std::ceil(std::sqrt(n));
      break;
  }
  if (!(width > 0.0)) return detail::exact_mode(ecdf.sorted);

  auto bins = static_cast<std::size_t>(std::ceil(range / width));
  bins = std::clamp<std::size_t>(bins, 1, 1u << 20);
  const double bin_width = range / static_cast<double>(bins);
  std::vector<std::size_t> count(bins, 0);
  for (double v : ecdf.sorted) {
    auto k = static_cast<std::size_t>((v - lo) / bin_width);
    if (k >= bins) k = bins - 1;
    ++count[k];
  }
  std::size_t best = 0;
  for (std::size_t k = 1; k < bins; ++k)
    if (count[k] > count[best]) best = k;
  return lo + (static_cast<double>(best) + 0.5) * bin_width;
}

}  // namespace hybtail
