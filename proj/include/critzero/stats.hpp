#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "critzero/errors.hpp"

namespace critzero {

/// Area-normalized histogram: sum of density * width over bins is 1.
struct Histogram {
  std::vector<double> edges;      // strictly increasing, bins + 1 entries
  std::vector<double> densities;  // one per bin, >= 0

  std::size_t bins() const noexcept { return densities.size(); }
  double width(std::size_t i) const { return edges[i + 1] - edges[i]; }
  double center(std::size_t i) const { return 0.5 * (edges[i] + edges[i + 1]); }

  double area() const {
    double a = 0.0;
    for (std::size_t i = 0; i < bins(); ++i) a += densities[i] * width(i);
    return a;
  }
};

inline std::vector<double> uniform_edges(double lo, double hi, std::size_t bins) {
  if (bins == 0 || !(hi > lo)) {
    throw Error(ErrorCode::invalid_argument, "uniform_edges: need bins >= 1 and hi > lo");
  }
  std::vector<double> edges(bins + 1);
  for (std::size_t i = 0; i <= bins; ++i) {
    edges[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(bins);
  }
  edges.back() = hi;
  return edges;
}

namespace detail {

inline std::size_t locate_bin(std::span<const double> edges, double x) {
  const auto it = std::upper_bound(edges.begin(), edges.end(), x);
  return static_cast<std::size_t>(it - edges.begin()) - 1;
}

}  // namespace detail

/// Histogram normalized to unit area. Every sample must lie in
/// [edges.front(), edges.back()); offenders are reported, never clipped.
inline Histogram histogram_pdf(std::span<const double> samples, std::span<const double> edges) {
  if (samples.empty()) throw Error(ErrorCode::data, "histogram_pdf: no samples");
  if (edges.size() < 2) throw Error(ErrorCode::invalid_argument, "histogram_pdf: need >= 2 edges");
  for (std::size_t i = 1; i < edges.size(); ++i) {
    if (!(edges[i] > edges[i - 1])) {
      throw Error(ErrorCode::invalid_argument, "histogram_pdf: edges must be strictly increasing");
    }
  }

  std::vector<double> counts(edges.size() - 1, 0.0);
  std::vector<std::size_t> offenders;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double x = samples[i];
    if (!(x >= edges.front() && x < edges.back())) {
      offenders.push_back(i);
      continue;
    }
    counts[detail::locate_bin(edges, x)] += 1.0;
  }
  if (!offenders.empty()) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "histogram_pdf: " << offenders.size() << " sample(s) outside [" << edges.front() << ", "
        << edges.back() << "):";
    for (std::size_t k = 0; k < std::min<std::size_t>(offenders.size(), 8); ++k) {
      msg << " [" << offenders[k] << "]=" << samples[offenders[k]];
    }
    if (offenders.size() > 8) msg << " ...";
    throw Error(ErrorCode::range, msg.str());
  }

  Histogram h;
  h.edges.assign(edges.begin(), edges.end());
  h.densities.resize(counts.size());
  const double total = static_cast<double>(samples.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    h.densities[i] = counts[i] / (total * (edges[i + 1] - edges[i]));
  }
  return h;
}

/// Histogram over [lo, hi) that diverts samples at or above hi into an
/// overflow count. Samples below lo remain a range error.
struct BoundedHistogram {
  Histogram histogram;
  std::size_t in_range = 0;
  std::size_t overflow = 0;
};

inline BoundedHistogram histogram_with_overflow(std::span<const double> samples, double lo, double hi,
                                                std::size_t bins) {
  std::vector<double> kept;
  kept.reserve(samples.size());
  BoundedHistogram out;
  for (const double x : samples) {
    if (x >= hi) {
      ++out.overflow;
    } else {
      kept.push_back(x);
    }
  }
  out.in_range = kept.size();
  const auto edges = uniform_edges(lo, hi, bins);
  if (kept.empty()) {
    throw Error(ErrorCode::data, "histogram_with_overflow: every sample overflowed");
  }
  out.histogram = histogram_pdf(kept, edges);
  return out;
}

/// Empirical quantile with the averaging convention at jumps: when q*n is an
/// integer k the result is the midpoint of the k-th and (k+1)-th order
/// statistics, otherwise the ceil(q*n)-th order statistic.
inline double quantile_sorted(std::span<const double> sorted, double q) {
  const std::size_t n = sorted.size();
  if (n == 0) throw Error(ErrorCode::data, "quantile: no samples");
  const double pos = q * static_cast<double>(n);
  const double fl = std::floor(pos);
  const auto k = static_cast<std::size_t>(fl);
  if (pos == fl) {
    if (k == 0) return sorted.front();
    if (k >= n) return sorted.back();
    return 0.5 * (sorted[k - 1] + sorted[k]);
  }
  return sorted[std::min(k, n - 1)];
}

/// The seven boundaries splitting the sample into eight equal-probability parts.
inline std::vector<double> octiles(std::span<const double> samples) {
  if (samples.size() < 8) throw Error(ErrorCode::data, "octiles: need at least 8 samples");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> out(7);
  for (int k = 1; k <= 7; ++k) out[k - 1] = quantile_sorted(sorted, k / 8.0);
  return out;
}

/// Centered moving average; the window shrinks at the ends.
inline std::vector<double> moving_average(std::span<const double> v, std::size_t window) {
  if (window == 0 || window % 2 == 0) {
    throw Error(ErrorCode::invalid_argument, "moving_average: window must be odd");
  }
  const std::size_t half = window / 2;
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::size_t lo = i >= half ? i - half : 0;
    const std::size_t hi = std::min(v.size() - 1, i + half);
    double s = 0.0;
    for (std::size_t j = lo; j <= hi; ++j) s += v[j];
    out[i] = s / static_cast<double>(hi - lo + 1);
  }
  return out;
}

/// Interior indices i (0 < i < n-1) that are strict local maxima, with
/// plateaus reported once at their first index.
inline std::vector<std::size_t> interior_local_maxima(std::span<const double> v) {
  std::vector<std::size_t> out;
  for (std::size_t i = 1; i + 1 < v.size(); ++i) {
    if (!(v[i] > v[i - 1])) continue;
    std::size_t j = i;
    while (j + 1 < v.size() && v[j + 1] == v[i]) ++j;
    if (j + 1 < v.size() && v[j + 1] < v[i]) out.push_back(i);
    i = j;
  }
  return out;
}

struct BimodalityCheck {
  bool bimodal = false;
  double first_mode = 0.0;   // bin center of the first maximum
  double trough = 0.0;       // bin center of the minimum between the maxima
  double second_mode = 0.0;  // bin center of the second maximum
  double first_peak = 0.0;
  double trough_depth = 0.0;
  double second_peak = 0.0;
};

/// Looks for two interior local maxima of the smoothed density with an
/// interior local minimum strictly between them, the second maximum inside
/// (second_lo, second_hi). The first maximum is the tallest one left of the
/// window; the second is the tallest one inside it.
inline BimodalityCheck check_bimodal(const Histogram& h, std::size_t window, double second_lo,
                                     double second_hi) {
  BimodalityCheck out;
  const auto smooth = moving_average(h.densities, window);
  const auto maxima = interior_local_maxima(smooth);

  std::ptrdiff_t first = -1;
  std::ptrdiff_t second = -1;
  for (const std::size_t i : maxima) {
    const double c = h.center(i);
    if (c <= second_lo) {
      if (first < 0 || smooth[i] > smooth[static_cast<std::size_t>(first)]) first = static_cast<std::ptrdiff_t>(i);
    } else if (c < second_hi) {
      if (second < 0 || smooth[i] > smooth[static_cast<std::size_t>(second)]) second = static_cast<std::ptrdiff_t>(i);
    }
  }
  if (first < 0 || second < 0) return out;

  const auto a = static_cast<std::size_t>(first);
  const auto b = static_cast<std::size_t>(second);
  std::size_t trough = a + 1;
  for (std::size_t i = a + 1; i < b; ++i) {
    if (smooth[i] < smooth[trough]) trough = i;
  }
  out.first_mode = h.center(a);
  out.second_mode = h.center(b);
  out.trough = h.center(trough);
  out.first_peak = smooth[a];
  out.second_peak = smooth[b];
  out.trough_depth = smooth[trough];
  out.bimodal = trough > a && trough < b && smooth[trough] < smooth[a] && smooth[trough] < smooth[b];
  return out;
}

}  // namespace critzero
