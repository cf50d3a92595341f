#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "critzero/critical.hpp"
#include "critzero/errors.hpp"
#include "critzero/linalg.hpp"
#include "critzero/matching.hpp"
#include "critzero/parallel.hpp"
#include "critzero/precision.hpp"
#include "critzero/rng.hpp"
#include "critzero/spectrum.hpp"

namespace critzero {

/// How zeros of p' are computed.
enum class Route {
  logderiv,     // Aberth on the log-derivative plus polishing, double precision
  coefficient,  // expanded coefficients at the configured precision
};

inline std::string route_name(Route r) { return r == Route::logderiv ? "logderiv" : "coefficient"; }

struct ExperimentConfig {
  std::size_t n = 20;
  std::size_t num_matrices = 1;
  std::uint64_t master_seed = 0;
  std::size_t shards = 1;
  unsigned precision_bits = 0;  // 0 selects n + 64
  std::size_t bins = 80;
  Route route = Route::logderiv;

  unsigned resolved_precision() const {
    return precision_bits == 0 ? default_precision_bits(n) : precision_bits;
  }
};

/// A per-item pipeline failure that was answered by drawing a fresh substream.
struct ResampleEvent {
  std::size_t item = 0;
  std::uint32_t attempt = 0;
  std::string reason;
};

inline constexpr std::uint32_t max_attempts = 16;

/// Rescaled radius N (1 - |z|).
inline double rescaled_radius(std::complex<double> z, std::size_t n) {
  return static_cast<double>(n) * (1.0 - std::abs(z));
}

/// Zeros of p' for the unitary polynomial with the given zeros, validated
/// against the Gauss-Lucas bound and the strict (0, N) range of N (1 - |z'|).
inline std::vector<std::complex<double>> derivative_zeros(std::span<const std::complex<double>> zeros, Route route,
                                                          unsigned precision_bits) {
  std::vector<std::complex<double>> crit = route == Route::logderiv
                                               ? critical_points(zeros).points
                                               : critical_points_coefficient(zeros, precision_bits);
  const std::size_t n = zeros.size();
  if (crit.size() + 1 != n) throw Error(ErrorCode::convergence, "derivative_zeros: wrong root count");
  for (const auto& z : crit) {
    if (!(std::abs(z) <= 1.0 + 1e-10)) {
      throw Error(ErrorCode::precision, "derivative_zeros: root outside the closed unit disc");
    }
    const double r = rescaled_radius(z, n);
    if (!(r > 0.0 && r < static_cast<double>(n))) {
      throw Error(ErrorCode::precision, "derivative_zeros: rescaled radius outside (0, N)");
    }
  }
  return crit;
}

struct MatrixSample {
  EigenAngleSpectrum spectrum;
  std::vector<std::complex<double>> zeros;
  std::vector<std::complex<double>> critical;
  std::vector<ResampleEvent> events;
};

/// One Haar matrix from substream `item`, its spectrum, and the zeros of the
/// derivative of its characteristic polynomial. Failures are retried on the
/// item's next substream, up to max_attempts.
inline MatrixSample sample_matrix(std::size_t n, std::uint64_t master_seed, std::size_t item, Route route,
                                  unsigned precision_bits) {
  MatrixSample out;
  for (std::uint32_t attempt = 0; attempt < max_attempts; ++attempt) {
    try {
      const auto u = haar_unitary(n, {master_seed, substream(item, attempt)});
      out.spectrum = eigenvalues_unitary(u);
      if (n >= 2) (void)normalized_gaps(out.spectrum);
      out.zeros = out.spectrum.zeros();
      out.critical = n >= 2 ? derivative_zeros(out.zeros, route, precision_bits) : std::vector<std::complex<double>>{};
      return out;
    } catch (const Error& e) {
      out.events.push_back({item, attempt, e.what()});
    }
  }
  throw Error(ErrorCode::convergence,
              "sample_matrix: item " + std::to_string(item) + " failed " + std::to_string(max_attempts) + " attempts");
}

/// Multiset of rescaled radii N (1 - |z'|), ordered by matrix index.
struct RadialSampleSet {
  std::size_t n = 0;
  std::vector<double> values;
  std::vector<ResampleEvent> events;
};

inline RadialSampleSet run_radial(const ExperimentConfig& cfg) {
  if (cfg.n < 2) throw Error(ErrorCode::invalid_dimension, "run_radial: need N >= 2");
  if (cfg.num_matrices == 0) throw Error(ErrorCode::invalid_argument, "run_radial: need at least one matrix");
  const unsigned bits = cfg.resolved_precision();
  std::vector<std::vector<double>> per(cfg.num_matrices);
  std::vector<std::vector<ResampleEvent>> events(cfg.num_matrices);
  for_each_sharded(cfg.num_matrices, cfg.shards, [&](std::size_t i) {
    auto s = sample_matrix(cfg.n, cfg.master_seed, i, cfg.route, bits);
    per[i].reserve(s.critical.size());
    for (const auto& z : s.critical) per[i].push_back(rescaled_radius(z, cfg.n));
    events[i] = std::move(s.events);
  });
  RadialSampleSet out;
  out.n = cfg.n;
  out.values.reserve(cfg.num_matrices * (cfg.n - 1));
  for (std::size_t i = 0; i < cfg.num_matrices; ++i) {
    out.values.insert(out.values.end(), per[i].begin(), per[i].end());
    out.events.insert(out.events.end(), events[i].begin(), events[i].end());
  }
  return out;
}

/// Fractions of rescaled radii in [0, 2), [2, 4) and [4, N).
struct RegionFractions {
  double inner = 0.0;
  double middle = 0.0;
  double deep = 0.0;
};

inline RegionFractions classify_regions(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorCode::data, "classify_regions: no values");
  std::size_t a = 0, b = 0, c = 0;
  for (const double v : values) {
    if (v < 2.0) {
      ++a;
    } else if (v < 4.0) {
      ++b;
    } else {
      ++c;
    }
  }
  const double total = static_cast<double>(values.size());
  return {static_cast<double>(a) / total, static_cast<double>(b) / total, static_cast<double>(c) / total};
}

inline RegionFractions classify_regions(const RadialSampleSet& r) { return classify_regions(r.values); }

/// Cyclic k-neighbor normalized gaps of num_matrices Haar spectra, ordered by
/// matrix index. No derivative is taken.
inline std::vector<double> run_gaps(const ExperimentConfig& cfg, std::size_t k) {
  if (cfg.n < 2) throw Error(ErrorCode::invalid_dimension, "run_gaps: need N >= 2");
  if (k == 0 || k > cfg.n) throw Error(ErrorCode::invalid_argument, "run_gaps: need 1 <= k <= N");
  if (cfg.num_matrices == 0) throw Error(ErrorCode::invalid_argument, "run_gaps: need at least one matrix");
  std::vector<std::vector<double>> per(cfg.num_matrices);
  for_each_sharded(cfg.num_matrices, cfg.shards, [&](std::size_t i) {
    for (std::uint32_t attempt = 0; attempt < max_attempts; ++attempt) {
      try {
        const auto u = haar_unitary(cfg.n, {cfg.master_seed, substream(i, attempt)});
        per[i] = k_neighbor_gaps(normalized_gaps(eigenvalues_unitary(u)), k);
        return;
      } catch (const Error&) {
      }
    }
    throw Error(ErrorCode::convergence, "run_gaps: item " + std::to_string(i) + " failed");
  });
  std::vector<double> out;
  out.reserve(cfg.num_matrices * cfg.n);
  for (const auto& v : per) out.insert(out.end(), v.begin(), v.end());
  return out;
}

// ---------------------------------------------------------------------------
// Locality under perturbation of distant zeros

struct PerturbationConfig {
  std::size_t n = 40;
  std::size_t trials = 250;
  double keep_lo = 0.0;  // zeros with angle in [keep_lo, keep_hi) stay fixed
  double keep_hi = std::numbers::pi / 2.0;
  double amplitude = -1.0;  // shifts are uniform in (-amplitude, amplitude); < 0 selects 2 pi/N
  std::uint64_t master_seed = 0;
  std::size_t shards = 1;

  double resolved_amplitude() const { return amplitude < 0.0 ? two_pi / static_cast<double>(n) : amplitude; }
};

struct PerturbationPoint {
  std::size_t trial = 0;
  std::complex<double> z;
};

struct PerturbationReport {
  std::size_t n = 0;
  EigenAngleSpectrum base_spectrum;
  std::vector<std::complex<double>> base_critical;
  std::size_t trials = 0;
  std::vector<PerturbationPoint> points;  // ordered by trial
  std::vector<ResampleEvent> events;
};

inline bool in_keep_window(double theta, double lo, double hi) { return theta >= lo && theta < hi; }

/// Base spectrum from substream 0; trial t draws its shifts from substream
/// t + 1. Perturbed angles are reduced mod 2 pi before the spectrum is rebuilt.
inline PerturbationReport run_perturbation(const PerturbationConfig& cfg) {
  if (cfg.n < 3) throw Error(ErrorCode::invalid_dimension, "run_perturbation: need N >= 3");
  if (cfg.trials == 0) throw Error(ErrorCode::invalid_argument, "run_perturbation: need at least one trial");
  const double amp = cfg.resolved_amplitude();
  if (!(amp >= 0.0)) throw Error(ErrorCode::invalid_argument, "run_perturbation: amplitude must be >= 0");

  PerturbationReport rep;
  rep.n = cfg.n;
  rep.trials = cfg.trials;
  auto base = sample_matrix(cfg.n, cfg.master_seed, 0, Route::logderiv, 0);
  rep.base_spectrum = base.spectrum;
  rep.base_critical = base.critical;
  rep.events = std::move(base.events);

  std::vector<std::vector<std::complex<double>>> per(cfg.trials);
  std::vector<std::vector<ResampleEvent>> events(cfg.trials);
  for_each_sharded(cfg.trials, cfg.shards, [&](std::size_t t) {
    for (std::uint32_t attempt = 0; attempt < max_attempts; ++attempt) {
      try {
        CounterRng rng({cfg.master_seed, substream(t + 1, attempt)});
        std::vector<double> angles;
        angles.reserve(cfg.n);
        for (const double theta : rep.base_spectrum.angles()) {
          if (in_keep_window(theta, cfg.keep_lo, cfg.keep_hi)) {
            angles.push_back(theta);
          } else {
            angles.push_back(theta + (amp > 0.0 ? rng.uniform(-amp, amp) : 0.0));
          }
        }
        const auto s = EigenAngleSpectrum::from_angles(std::move(angles));
        (void)normalized_gaps(s);
        const auto zeros = s.zeros();
        per[t] = derivative_zeros(zeros, Route::logderiv, 0);
        return;
      } catch (const Error& e) {
        events[t].push_back({t, attempt, e.what()});
      }
    }
    throw Error(ErrorCode::convergence, "run_perturbation: trial " + std::to_string(t) + " failed");
  });

  rep.points.reserve(cfg.trials * (cfg.n - 1));
  for (std::size_t t = 0; t < cfg.trials; ++t) {
    for (const auto& z : per[t]) rep.points.push_back({t, z});
    rep.events.insert(rep.events.end(), events[t].begin(), events[t].end());
  }
  return rep;
}

/// Cross-trial spread of each base derivative zero: in every trial the
/// perturbed derivative zeros are matched one-to-one to the base ones, and
/// the dispersion is the standard deviation of the matched points.
struct LocalityStats {
  std::vector<double> dispersion;  // per base derivative zero
  std::size_t near_count = 0;      // arg in (pi/8, 3 pi/8) and N (1 - |z'|) < 4
  std::size_t deep_count = 0;      // N (1 - |z'|) > 4
  double near_median = 0.0;
  double deep_median = 0.0;

  bool local() const { return near_count > 0 && deep_count > 0 && near_median < 0.25 * deep_median; }
};

inline double median_of(std::vector<double> v) {
  if (v.empty()) return std::nan("");
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

inline LocalityStats perturbation_locality(const PerturbationReport& rep) {
  const std::size_t k = rep.base_critical.size();
  std::vector<std::complex<double>> matched(k * rep.trials);
  std::vector<std::complex<double>> trial;
  std::size_t idx = 0;
  for (std::size_t t = 0; t < rep.trials; ++t) {
    trial.clear();
    while (idx < rep.points.size() && rep.points[idx].trial == t) trial.push_back(rep.points[idx++].z);
    if (trial.size() != k) throw Error(ErrorCode::data, "perturbation_locality: trial point count mismatch");
    const auto m = match_points(rep.base_critical, trial);
    for (std::size_t i = 0; i < k; ++i) matched[i * rep.trials + t] = trial[m.partner[i]];
  }
  LocalityStats st;
  st.dispersion.resize(k);
  const double tt = static_cast<double>(rep.trials);
  std::vector<double> near, deep;
  for (std::size_t i = 0; i < k; ++i) {
    const std::span<const std::complex<double>> zs(matched.data() + i * rep.trials, rep.trials);
    std::complex<double> mean = 0.0;
    for (const auto& z : zs) mean += z;
    mean /= tt;
    double var = 0.0;
    for (const auto& z : zs) var += std::norm(z - mean);
    st.dispersion[i] = std::sqrt(var / tt);
    const auto& b = rep.base_critical[i];
    const double r = rescaled_radius(b, rep.n);
    const double a = std::arg(b);
    if (a > std::numbers::pi / 8.0 && a < 3.0 * std::numbers::pi / 8.0 && r < 4.0) near.push_back(st.dispersion[i]);
    if (r > 4.0) deep.push_back(st.dispersion[i]);
  }
  st.near_count = near.size();
  st.deep_count = deep.size();
  st.near_median = median_of(near);
  st.deep_median = median_of(deep);
  return st;
}

// ---------------------------------------------------------------------------
// Derivative zeros next to wide triples

struct SpecialZeroReport {
  std::size_t n = 0;
  std::size_t num_matrices = 0;
  std::size_t num_triples = 0;
  std::vector<std::size_t> counts;  // counts[k]: triples with exactly k zeros in the target disc
  std::vector<std::complex<double>> rotated_points;
  std::vector<double> radial_values;
  std::vector<ResampleEvent> events;

  double fraction(std::size_t k) const {
    if (num_triples == 0) return 0.0;
    return k < counts.size() ? static_cast<double>(counts[k]) / static_cast<double>(num_triples) : 0.0;
  }

  double triples_per_matrix() const {
    return num_matrices == 0 ? 0.0 : static_cast<double>(num_triples) / static_cast<double>(num_matrices);
  }
};

/// Adds one spectrum's wide triples and their target-disc contents.
inline void accumulate_special(const EigenAngleSpectrum& s, std::span<const std::complex<double>> critical,
                               SpecialZeroReport& rep) {
  const std::size_t n = s.size();
  ++rep.num_matrices;
  for (const auto& t : find_wide_triples(s)) {
    const auto disc = target_disc(t, n);
    std::size_t inside = 0;
    for (const auto& z : critical) {
      if (!disc.contains(z)) continue;
      ++inside;
      rep.rotated_points.push_back(rotate_to_reference(z, t.center_angle));
      rep.radial_values.push_back(rescaled_radius(z, n));
    }
    if (rep.counts.size() <= inside) rep.counts.resize(inside + 1, 0);
    ++rep.counts[inside];
    ++rep.num_triples;
  }
}

inline void merge_special(SpecialZeroReport& into, const SpecialZeroReport& part) {
  into.num_matrices += part.num_matrices;
  into.num_triples += part.num_triples;
  if (into.counts.size() < part.counts.size()) into.counts.resize(part.counts.size(), 0);
  for (std::size_t k = 0; k < part.counts.size(); ++k) into.counts[k] += part.counts[k];
  into.rotated_points.insert(into.rotated_points.end(), part.rotated_points.begin(), part.rotated_points.end());
  into.radial_values.insert(into.radial_values.end(), part.radial_values.begin(), part.radial_values.end());
  into.events.insert(into.events.end(), part.events.begin(), part.events.end());
}

inline SpecialZeroReport special_from_spectrum(const EigenAngleSpectrum& s) {
  if (s.size() < 6) throw Error(ErrorCode::invalid_dimension, "special: need N >= 6");
  SpecialZeroReport rep;
  rep.n = s.size();
  rep.counts.assign(1, 0);
  if (find_wide_triples(s).empty()) {
    // Equal spacing makes p' a monomial; nothing to locate.
    ++rep.num_matrices;
    return rep;
  }
  const auto crit = derivative_zeros(s.zeros(), Route::logderiv, 0);
  accumulate_special(s, crit, rep);
  return rep;
}

inline SpecialZeroReport run_special(const ExperimentConfig& cfg) {
  if (cfg.n < 6) throw Error(ErrorCode::invalid_dimension, "run_special: need N >= 6");
  if (cfg.num_matrices == 0) throw Error(ErrorCode::invalid_argument, "run_special: need at least one matrix");
  const unsigned bits = cfg.resolved_precision();
  std::vector<SpecialZeroReport> per(cfg.num_matrices);
  for_each_sharded(cfg.num_matrices, cfg.shards, [&](std::size_t i) {
    auto s = sample_matrix(cfg.n, cfg.master_seed, i, cfg.route, bits);
    per[i].n = cfg.n;
    accumulate_special(s.spectrum, s.critical, per[i]);
    per[i].events = std::move(s.events);
  });
  SpecialZeroReport rep;
  rep.n = cfg.n;
  rep.counts.assign(1, 0);
  for (const auto& p : per) merge_special(rep, p);
  return rep;
}

/// Deterministic synthetic spectra for RNG-free runs.
enum class DemoSpectrum {
  equal_spaced,   // no wide triples
  single_triple,  // exactly one wide triple, centered at angle 0
};

inline EigenAngleSpectrum demo_spectrum(DemoSpectrum kind, std::size_t n) {
  if (n < 6) throw Error(ErrorCode::invalid_dimension, "demo_spectrum: need N >= 6");
  if (kind == DemoSpectrum::equal_spaced) return EigenAngleSpectrum::equally_spaced(n);
  // Gaps of 1.5 on both sides of angle 0, the rest shrunk evenly below 1.
  const double nn = static_cast<double>(n);
  const double wide = 1.5;
  const double narrow = (nn - 2.0 * wide) / (nn - 2.0);
  std::vector<double> angles(n);
  angles[0] = 0.0;
  double theta = wide;
  for (std::size_t k = 1; k < n; ++k) {
    angles[k] = theta * two_pi / nn;
    theta += k + 1 < n ? narrow : wide;
  }
  return EigenAngleSpectrum::from_angles(std::move(angles));
}

}  // namespace critzero
