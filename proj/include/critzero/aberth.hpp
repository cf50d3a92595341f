#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "critzero/errors.hpp"
#include "critzero/polynomial.hpp"
#include "critzero/precision.hpp"

namespace critzero {

struct AberthOptions {
  double tol = 1e-12;
  int max_iters = 200;
  double start_radius = 0.95;
  double start_offset = 0.41421356237309515;  // sqrt(2) - 1
};

/// Roots with per-root residuals |q(z)/q'(z)| (the Newton step length).
template <class Complex>
struct RootSet {
  std::vector<Complex> roots;
  std::vector<double> residuals;
  std::vector<bool> clustered;
  bool converged = false;
  int iterations = 0;

  std::size_t size() const noexcept { return roots.size(); }

  double max_residual() const {
    double m = 0.0;
    for (const double r : residuals) m = std::max(m, r);
    return m;
  }

  bool any_clustered() const { return std::find(clustered.begin(), clustered.end(), true) != clustered.end(); }
};

/// Raised when the iteration budget is exhausted with unconverged roots that
/// are not part of a multiplicity cluster. Carries the best iterate.
class AberthConvergenceError : public Error {
 public:
  explicit AberthConvergenceError(RootSet<std::complex<double>> best)
      : Error(ErrorCode::convergence,
              "aberth: not converged, max residual " + std::to_string(best.max_residual())),
        best_(std::move(best)) {}

  const RootSet<std::complex<double>>& best() const noexcept { return best_; }

 private:
  RootSet<std::complex<double>> best_;
};

/// q(z)/q'(z) represented as num/den, so that an exact root (num = 0) and a
/// stationary point (den = 0) are both representable.
template <class Complex>
struct NewtonTerms {
  Complex num;
  Complex den;
};

namespace detail {

template <class Complex>
double residual_of(const NewtonTerms<Complex>& t) {
  using std::abs;
  const double n = to_double(abs(t.num));
  const double d = to_double(abs(t.den));
  if (n == 0.0) return 0.0;
  if (d == 0.0) return std::numeric_limits<double>::infinity();
  return n / d;
}

template <class Complex>
void flag_clusters(RootSet<Complex>& rs, double tol) {
  using std::abs;
  const double radius = 10.0 * std::sqrt(tol);
  rs.clustered.assign(rs.roots.size(), false);
  for (std::size_t i = 0; i < rs.roots.size(); ++i) {
    for (std::size_t j = i + 1; j < rs.roots.size(); ++j) {
      if (to_double(abs(rs.roots[i] - rs.roots[j])) < radius) {
        rs.clustered[i] = true;
        rs.clustered[j] = true;
      }
    }
  }
}

}  // namespace detail

/// Aberth-Ehrlich simultaneous iteration (Gauss-Seidel ordering) for the
/// `degree` roots of a function q given through its Newton terms. Starting
/// points are equally spaced on a circle of radius opts.start_radius, rotated
/// by opts.start_offset. A root is frozen once its residual reaches opts.tol.
template <class Complex, class Terms>
RootSet<Complex> aberth_solve(std::size_t degree, Terms&& terms, const AberthOptions& opts = {}) {
  using std::abs;
  RootSet<Complex> rs;
  if (degree == 0) {
    rs.converged = true;
    return rs;
  }
  rs.roots.resize(degree);
  rs.residuals.assign(degree, std::numeric_limits<double>::infinity());
  for (std::size_t k = 0; k < degree; ++k) {
    const double t = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(degree) + opts.start_offset;
    rs.roots[k] = Complex(opts.start_radius * std::cos(t), opts.start_radius * std::sin(t));
  }

  std::vector<bool> done(degree, false);
  std::size_t remaining = degree;
  int it = 0;
  for (; it < opts.max_iters && remaining > 0; ++it) {
    for (std::size_t k = 0; k < degree; ++k) {
      if (done[k]) continue;
      const Complex zk = rs.roots[k];
      const NewtonTerms<Complex> t = terms(zk);
      const double res = detail::residual_of(t);
      rs.residuals[k] = res;
      if (res <= opts.tol) {
        done[k] = true;
        --remaining;
        continue;
      }
      Complex s(0);
      for (std::size_t j = 0; j < degree; ++j) {
        if (j == k) continue;
        const Complex d = zk - rs.roots[j];
        if (d != Complex(0)) s += Complex(1) / d;
      }
      const Complex den = t.den - t.num * s;
      Complex step;
      if (den == Complex(0) || !std::isfinite(to_double(abs(den)))) {
        step = Complex(1e-3 * (1.0 + static_cast<double>(k) / static_cast<double>(degree)), 1e-3);
      } else {
        step = t.num / den;
      }
      rs.roots[k] = zk - step;
    }
  }
  rs.iterations = it;

  for (std::size_t k = 0; k < degree; ++k) rs.residuals[k] = detail::residual_of(terms(rs.roots[k]));
  detail::flag_clusters(rs, opts.tol);

  bool all = true;
  bool only_clusters = true;
  for (std::size_t k = 0; k < degree; ++k) {
    if (!(rs.residuals[k] <= opts.tol)) {
      all = false;
      if (!rs.clustered[k]) only_clusters = false;
    }
  }
  rs.converged = all;
  if (!all && !only_clusters) {
    RootSet<std::complex<double>> best;
    for (const auto& z : rs.roots) best.roots.push_back(to_cplx(z));
    best.residuals = rs.residuals;
    best.clustered = rs.clustered;
    best.iterations = rs.iterations;
    throw AberthConvergenceError(std::move(best));
  }
  return rs;
}

/// All roots of a coefficient polynomial at its working precision.
template <class Real>
RootSet<complex_t<Real>> find_roots_aberth(const Polynomial<Real>& p, const AberthOptions& opts = {}) {
  if (p.degenerate() || p.degree() == 0) {
    throw Error(ErrorCode::invalid_argument, "find_roots_aberth: need degree >= 1");
  }
  using C = complex_t<Real>;
  return aberth_solve<C>(
      p.degree(),
      [&p](const C& z) {
        const auto vd = evaluate_with_derivative(p, z);
        return NewtonTerms<C>{vd.value, vd.derivative};
      },
      opts);
}

}  // namespace critzero
