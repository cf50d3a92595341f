#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

#include "critzero/errors.hpp"
#include "critzero/stats.hpp"

namespace critzero {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Angles closer than this are treated as a repeated eigenvalue.
inline constexpr double duplicate_angle_tol = 1e-12;

/// Reduces an angle to [0, 2*pi).
inline double wrap_angle(double theta) {
  double t = std::fmod(theta, two_pi);
  if (t < 0.0) t += two_pi;
  if (t >= two_pi) t = 0.0;
  return t;
}

/// Sorted eigenangles theta_1 <= ... <= theta_N in [0, 2*pi); the zeros of the
/// associated unitary polynomial are exp(i*theta_j).
class EigenAngleSpectrum {
 public:
  EigenAngleSpectrum() = default;

  /// Wraps every angle into [0, 2*pi) and sorts.
  static EigenAngleSpectrum from_angles(std::vector<double> angles) {
    if (angles.empty()) throw Error(ErrorCode::invalid_dimension, "spectrum: need at least one angle");
    for (double& t : angles) {
      if (!std::isfinite(t)) throw Error(ErrorCode::invalid_argument, "spectrum: non-finite angle");
      t = wrap_angle(t);
    }
    std::sort(angles.begin(), angles.end());
    EigenAngleSpectrum s;
    s.angles_ = std::move(angles);
    return s;
  }

  /// Angles of unit-modulus points; the caller guarantees |z| = 1.
  static EigenAngleSpectrum from_unit_points(std::span<const std::complex<double>> zs) {
    std::vector<double> angles;
    angles.reserve(zs.size());
    for (const auto& z : zs) angles.push_back(std::arg(z));
    return from_angles(std::move(angles));
  }

  /// N equally spaced angles 2*pi*k/N + offset.
  static EigenAngleSpectrum equally_spaced(std::size_t n, double offset = 0.0) {
    std::vector<double> angles(n);
    for (std::size_t k = 0; k < n; ++k) angles[k] = offset + two_pi * static_cast<double>(k) / static_cast<double>(n);
    return from_angles(std::move(angles));
  }

  std::size_t size() const noexcept { return angles_.size(); }
  std::span<const double> angles() const noexcept { return angles_; }
  double operator[](std::size_t i) const { return angles_[i]; }

  std::vector<std::complex<double>> zeros() const {
    std::vector<std::complex<double>> z;
    z.reserve(angles_.size());
    for (const double t : angles_) z.push_back(std::polar(1.0, t));
    return z;
  }

  /// Same spectrum rotated by phi (re-wrapped and re-sorted).
  EigenAngleSpectrum rotated(double phi) const {
    std::vector<double> a(angles_);
    for (double& t : a) t += phi;
    return from_angles(std::move(a));
  }

  friend bool operator==(const EigenAngleSpectrum&, const EigenAngleSpectrum&) = default;

 private:
  std::vector<double> angles_;
};

/// Cyclic normalized gaps N*(theta_{j+1} - theta_j)/(2*pi); the last entry is
/// the wrap-around gap. Mean gap is 1 and the gaps sum to N.
struct NormalizedGapList {
  std::vector<double> gaps;

  std::size_t size() const noexcept { return gaps.size(); }
  double operator[](std::size_t i) const { return gaps[i]; }
};

inline NormalizedGapList normalized_gaps(const EigenAngleSpectrum& s) {
  const std::size_t n = s.size();
  if (n < 2) throw Error(ErrorCode::invalid_dimension, "normalized_gaps: need N >= 2");
  const double scale = static_cast<double>(n) / two_pi;
  NormalizedGapList out;
  out.gaps.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double raw = j + 1 < n ? s[j + 1] - s[j] : s[0] + two_pi - s[n - 1];
    if (raw <= duplicate_angle_tol) {
      throw Error(ErrorCode::degenerate_spectrum, "normalized_gaps: repeated angle at index " + std::to_string(j));
    }
    out.gaps[j] = raw * scale;
  }
  return out;
}

/// Three consecutive zeros whose two separating gaps both exceed the mean.
struct TripleConfiguration {
  std::size_t center_index = 0;
  double left_gap = 0.0;   // gap between zeros center-1 and center
  double right_gap = 0.0;  // gap between zeros center and center+1
  double center_angle = 0.0;
};

/// All cyclic indices j with gap_{j-1} > 1 and gap_j > 1 (strict).
// Normalized gaps of an equally spaced spectrum round to 1 + O(N eps); this
// margin keeps them from counting as wide.
inline constexpr double wide_gap_margin = 1e-12;

inline std::vector<TripleConfiguration> find_wide_triples(const EigenAngleSpectrum& s) {
  const std::size_t n = s.size();
  if (n < 3) throw Error(ErrorCode::invalid_dimension, "find_wide_triples: need N >= 3");
  const auto g = normalized_gaps(s);
  std::vector<TripleConfiguration> out;
  for (std::size_t j = 0; j < n; ++j) {
    const double left = g[(j + n - 1) % n];
    const double right = g[j];
    if (left > 1.0 + wide_gap_margin && right > 1.0 + wide_gap_margin) out.push_back({j, left, right, s[j]});
  }
  return out;
}

/// Disc where a derivative zero is expected next to a wide triple.
struct TargetDisc {
  std::complex<double> center;
  double radius = 0.0;

  bool contains(std::complex<double> z) const { return std::abs(z - center) < radius; }
};

inline TargetDisc target_disc_at(double center_angle, std::size_t n) {
  const double nn = static_cast<double>(n);
  return {std::polar(1.0 - 3.0 / nn, center_angle), 2.5 / nn};
}

inline TargetDisc target_disc(const TripleConfiguration& t, std::size_t n) {
  if (n < 6) throw Error(ErrorCode::invalid_dimension, "target_disc: need N >= 6");
  return target_disc_at(t.center_angle, n);
}

/// Rotates z so that the reference angle theta maps to the positive real axis.
inline std::complex<double> rotate_to_reference(std::complex<double> z, double theta) {
  return z * std::polar(1.0, -theta);
}

/// k-neighbor gaps: sums of k consecutive cyclic normalized gaps.
inline std::vector<double> k_neighbor_gaps(const NormalizedGapList& g, std::size_t k) {
  if (k == 0 || k > g.size()) throw Error(ErrorCode::invalid_argument, "k_neighbor_gaps: need 1 <= k <= N");
  const std::size_t n = g.size();
  std::vector<double> out(n);
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < k; ++i) s += g[(j + i) % n];
    out[j] = s;
  }
  return out;
}

struct GapPdf {
  Histogram histogram;
  double mean = 0.0;
  std::size_t samples = 0;
  std::size_t overflow = 0;
};

inline constexpr std::size_t min_gap_samples = 1000;

/// Histogram density estimate of the gap distribution on [0, upper). Samples
/// at or beyond upper go to the overflow count; they enter the mean but not
/// the unit-area histogram.
inline GapPdf estimate_gap_pdf(std::span<const double> samples, std::size_t bins, double upper = 4.0) {
  if (samples.empty()) throw Error(ErrorCode::data, "estimate_gap_pdf: empty input");
  if (samples.size() < min_gap_samples) {
    throw Error(ErrorCode::data, "estimate_gap_pdf: need at least 1000 samples, got " + std::to_string(samples.size()));
  }
  GapPdf out;
  out.samples = samples.size();
  double sum = 0.0;
  std::vector<double> counts(bins, 0.0);
  const auto edges = uniform_edges(0.0, upper, bins);
  for (const double x : samples) {
    if (!(x >= 0.0)) throw Error(ErrorCode::range, "estimate_gap_pdf: negative gap");
    sum += x;
    if (x >= upper) {
      ++out.overflow;
    } else {
      counts[detail::locate_bin(edges, x)] += 1.0;
    }
  }
  out.mean = sum / static_cast<double>(samples.size());
  const double in_range = static_cast<double>(samples.size() - out.overflow);
  if (in_range == 0.0) throw Error(ErrorCode::data, "estimate_gap_pdf: every sample overflowed");
  out.histogram.edges = edges;
  out.histogram.densities.resize(bins);
  for (std::size_t i = 0; i < bins; ++i) {
    out.histogram.densities[i] = counts[i] / (in_range * (edges[i + 1] - edges[i]));
  }
  return out;
}

}  // namespace critzero
