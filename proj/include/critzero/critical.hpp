#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

#include "critzero/aberth.hpp"
#include "critzero/errors.hpp"
#include "critzero/polynomial.hpp"
#include "critzero/precision.hpp"

// Critical points of p(z) = prod (z - z_j) without forming coefficients:
// p'/p = S1 and p''/p = S1^2 - S2, with S1 = sum 1/(z - z_j) and
// S2 = sum 1/(z - z_j)^2.

namespace critzero {

struct LogDerivativeSums {
  std::complex<double> s1;
  std::complex<double> s2;
  double abs_sum = 0.0;  // sum |1/(z - z_j)|, the rounding scale of s1
};

inline LogDerivativeSums log_derivative_sums(std::span<const std::complex<double>> zeros, std::complex<double> z) {
  LogDerivativeSums s;
  for (const auto& zj : zeros) {
    const std::complex<double> inv = 1.0 / (z - zj);
    s.s1 += inv;
    s.s2 += inv * inv;
    s.abs_sum += std::abs(inv);
  }
  return s;
}

/// Roots of p' by Aberth iteration driven by the log-derivative sums.
inline RootSet<std::complex<double>> critical_points_aberth(std::span<const std::complex<double>> zeros,
                                                            const AberthOptions& opts = {}) {
  if (zeros.empty()) throw Error(ErrorCode::invalid_argument, "critical points: need at least one zero");
  using C = std::complex<double>;
  return aberth_solve<C>(
      zeros.size() - 1,
      [zeros](const C& z) {
        const auto s = log_derivative_sums(zeros, z);
        return NewtonTerms<C>{s.s1, s.s1 * s.s1 - s.s2};
      },
      opts);
}

enum class PolishStatus {
  converged,  // |S1| <= tol
  stalled,    // Newton steps reached the rounding floor of S1 before tol
  failed,     // diverged or left the basin; the candidate should be kept
};

struct PolishOptions {
  double tol = 1e-12;
  int max_iters = 50;
  double basin = 0.0;  // 0 selects 2 * (2*pi/N)
};

struct PolishResult {
  std::complex<double> z;
  double residual = 0.0;  // |S1(z)|
  PolishStatus status = PolishStatus::failed;

  bool usable() const noexcept { return status != PolishStatus::failed; }
};

/// Newton iteration on S1(z) = sum 1/(z - z_j) from the candidate. The zeros
/// of p must be simple and the candidate must not coincide with one of them.
inline PolishResult polish_logderiv(std::span<const std::complex<double>> zeros, std::complex<double> candidate,
                                    const PolishOptions& opts = {}) {
  const double basin =
      opts.basin > 0.0 ? opts.basin : 2.0 * (2.0 * std::numbers::pi / static_cast<double>(zeros.size()));
  constexpr double eps = std::numeric_limits<double>::epsilon();
  PolishResult out{candidate, std::numeric_limits<double>::infinity(), PolishStatus::failed};

  std::complex<double> z = candidate;
  for (int it = 0; it <= opts.max_iters; ++it) {
    const auto s = log_derivative_sums(zeros, z);
    const double r = std::abs(s.s1);
    if (!std::isfinite(r)) return out;
    if (r <= opts.tol) return {z, r, PolishStatus::converged};
    if (it == opts.max_iters || s.s2 == std::complex<double>{}) {
      if (r <= 64.0 * eps * s.abs_sum) return {z, r, PolishStatus::stalled};
      return out;
    }
    const std::complex<double> step = s.s1 / s.s2;
    const std::complex<double> next = z + step;
    if (!(std::abs(next - candidate) <= basin)) return out;
    if (std::abs(step) <= 4.0 * eps * std::max(1.0, std::abs(z))) {
      const double rn = std::abs(log_derivative_sums(zeros, next).s1);
      if (rn <= opts.tol) return {next, rn, PolishStatus::converged};
      return {next, rn, PolishStatus::stalled};
    }
    z = next;
  }
  return out;
}

struct CriticalPoints {
  std::vector<std::complex<double>> points;
  std::size_t polish_failures = 0;
  int aberth_iterations = 0;
};

/// Production route: Aberth on the log-derivative, then per-root polishing.
/// Roots whose polish fails keep their Aberth value.
inline CriticalPoints critical_points(std::span<const std::complex<double>> zeros, const AberthOptions& opts = {}) {
  const auto rs = critical_points_aberth(zeros, opts);
  CriticalPoints out;
  out.aberth_iterations = rs.iterations;
  out.points.reserve(rs.size());
  for (const auto& z : rs.roots) {
    const auto pr = polish_logderiv(zeros, z);
    if (pr.usable()) {
      out.points.push_back(pr.z);
    } else {
      out.points.push_back(z);
      ++out.polish_failures;
    }
  }
  return out;
}

/// Oracle route: expand p from its zeros at `precision_bits`, differentiate,
/// and run Aberth on the coefficients.
inline std::vector<std::complex<double>> critical_points_coefficient(std::span<const std::complex<double>> zeros,
                                                                     unsigned precision_bits,
                                                                     const AberthOptions& opts = {}) {
  if (zeros.size() < 2) throw Error(ErrorCode::invalid_argument, "critical points: need at least two zeros");
  return with_precision(precision_bits, [&](auto tag) {
    using Real = typename decltype(tag)::type;
    const auto p = poly_from_roots<Real>(zeros);
    const auto rs = find_roots_aberth(differentiate(p), opts);
    std::vector<std::complex<double>> out;
    out.reserve(rs.size());
    for (const auto& z : rs.roots) out.push_back(to_cplx(z));
    return out;
  });
}

}  // namespace critzero
