#pragma once

#include <algorithm>
#include <complex>
#include <cstddef>
#include <limits>
#include <span>
#include <tuple>
#include <vector>

#include "critzero/errors.hpp"

namespace critzero {

/// One-to-one pairing of two equally sized point sets.
struct PointMatching {
  std::vector<std::size_t> partner;  // partner[i] indexes b for a[i]
  std::vector<double> distance;      // |a[i] - b[partner[i]]|
  double max_distance = 0.0;
};

/// Greedy global matching: repeatedly pairs the closest remaining (a, b)
/// points. Exact whenever the two sets agree to well below their separation.
inline PointMatching match_points(std::span<const std::complex<double>> a, std::span<const std::complex<double>> b) {
  if (a.size() != b.size()) throw Error(ErrorCode::invalid_argument, "match_points: size mismatch");
  const std::size_t n = a.size();
  std::vector<std::tuple<double, std::size_t, std::size_t>> pairs;
  pairs.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) pairs.emplace_back(std::abs(a[i] - b[j]), i, j);
  }
  std::sort(pairs.begin(), pairs.end());

  PointMatching m;
  m.partner.assign(n, n);
  m.distance.assign(n, 0.0);
  std::vector<bool> used(n, false);
  std::size_t matched = 0;
  for (const auto& [d, i, j] : pairs) {
    if (matched == n) break;
    if (m.partner[i] != n || used[j]) continue;
    m.partner[i] = j;
    m.distance[i] = d;
    used[j] = true;
    ++matched;
    m.max_distance = std::max(m.max_distance, d);
  }
  return m;
}

}  // namespace critzero
