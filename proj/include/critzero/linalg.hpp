#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "critzero/errors.hpp"
#include "critzero/matrix.hpp"
#include "critzero/rng.hpp"
#include "critzero/spectrum.hpp"

namespace critzero {

/// n x n matrix of independent standard complex Gaussians a + bi, with a and
/// b drawn from N(0, 1) in row-major order from the given stream.
inline ComplexMatrix sample_ginibre(std::size_t n, SeedStream seed) {
  if (n == 0) throw Error(ErrorCode::invalid_dimension, "sample_ginibre: dimension must be >= 1");
  ComplexMatrix g(n);
  CounterRng rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double re = rng.normal();
      const double im = rng.normal();
      g(i, j) = {re, im};
    }
  }
  return g;
}

struct QrFactors {
  ComplexMatrix q;
  ComplexMatrix r;
};

namespace detail {

inline double sq(cplx z) noexcept { return z.real() * z.real() + z.imag() * z.imag(); }

inline cplx unit_phase(cplx z) noexcept {
  const double a = std::abs(z);
  return a == 0.0 ? cplx(1.0) : z / a;
}

/// Householder vector v (first entry adjusted in place) with H = I - beta v v^H
/// mapping x to alpha e_1. beta is 0 for a zero column.
struct Reflector {
  std::vector<cplx> v;
  double beta = 0.0;
  cplx alpha;
};

inline Reflector make_reflector(std::vector<cplx> x) {
  Reflector h;
  double norm2 = 0.0;
  for (const auto& z : x) norm2 += sq(z);
  const double norm = std::sqrt(norm2);
  if (norm == 0.0) {
    h.v = std::move(x);
    h.alpha = 0.0;
    return h;
  }
  const double a0 = std::abs(x[0]);
  h.alpha = -unit_phase(x[0]) * norm;
  x[0] -= h.alpha;
  h.beta = 1.0 / (norm2 + a0 * norm);
  h.v = std::move(x);
  return h;
}

}  // namespace detail

/// Householder QR. R's diagonal carries the phases -x0/|x0| of the pivots.
inline QrFactors householder_qr(ComplexMatrix a) {
  const std::size_t n = a.size();
  std::vector<detail::Reflector> refl;
  refl.reserve(n);
  std::vector<cplx> w(n);

  for (std::size_t k = 0; k + 1 < n; ++k) {
    std::vector<cplx> x(n - k);
    for (std::size_t i = k; i < n; ++i) x[i - k] = a(i, k);
    auto h = detail::make_reflector(std::move(x));
    if (h.beta != 0.0) {
      std::fill(w.begin() + static_cast<std::ptrdiff_t>(k) + 1, w.end(), cplx{});
      for (std::size_t i = k; i < n; ++i) {
        const cplx vi = std::conj(h.v[i - k]);
        const auto ai = a.row(i);
        for (std::size_t j = k + 1; j < n; ++j) w[j] += vi * ai[j];
      }
      for (std::size_t i = k; i < n; ++i) {
        const cplx vi = h.beta * h.v[i - k];
        auto ai = a.row(i);
        for (std::size_t j = k + 1; j < n; ++j) ai[j] -= vi * w[j];
      }
      a(k, k) = h.alpha;
      for (std::size_t i = k + 1; i < n; ++i) a(i, k) = 0.0;
    }
    refl.push_back(std::move(h));
  }

  ComplexMatrix q = ComplexMatrix::identity(n);
  for (std::size_t kk = refl.size(); kk-- > 0;) {
    const auto& h = refl[kk];
    if (h.beta == 0.0) continue;
    std::fill(w.begin() + static_cast<std::ptrdiff_t>(kk), w.end(), cplx{});
    for (std::size_t i = kk; i < n; ++i) {
      const cplx vi = std::conj(h.v[i - kk]);
      const auto qi = q.row(i);
      for (std::size_t j = kk; j < n; ++j) w[j] += vi * qi[j];
    }
    for (std::size_t i = kk; i < n; ++i) {
      const cplx vi = h.beta * h.v[i - kk];
      auto qi = q.row(i);
      for (std::size_t j = kk; j < n; ++j) qi[j] -= vi * w[j];
    }
  }
  return {std::move(q), std::move(a)};
}

/// Estimate of the operator norm of U^*U - I by a few steps of power
/// iteration from a fixed start vector; costs O(n^2) per step.
inline double unitarity_defect(const ComplexMatrix& u, int steps = 8) {
  const std::size_t n = u.size();
  std::vector<cplx> x(n), y(n), z(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = {1.0 + 0.37 * static_cast<double>(i % 7), 0.5 - 0.21 * static_cast<double>(i % 5)};
  }
  auto norm = [](const std::vector<cplx>& v) {
    double s = 0.0;
    for (const auto& c : v) s += detail::sq(c);
    return std::sqrt(s);
  };
  double est = 0.0;
  for (int it = 0; it < steps; ++it) {
    const double xn = norm(x);
    for (std::size_t i = 0; i < n; ++i) {
      cplx s{};
      const auto ui = u.row(i);
      for (std::size_t j = 0; j < n; ++j) s += ui[j] * x[j];
      y[i] = s;
    }
    std::fill(z.begin(), z.end(), cplx{});
    for (std::size_t i = 0; i < n; ++i) {
      const auto ui = u.row(i);
      const cplx yi = y[i];
      for (std::size_t j = 0; j < n; ++j) z[j] += std::conj(ui[j]) * yi;
    }
    for (std::size_t i = 0; i < n; ++i) z[i] -= x[i];
    const double zn = norm(z);
    est = std::max(est, zn / xn);
    if (zn == 0.0) break;
    for (std::size_t i = 0; i < n; ++i) x[i] = z[i] / zn;
  }
  return est;
}

/// A matrix certified unitary: its defect estimate is at most 1e-10 * n.
class UnitaryMatrix {
 public:
  static double tolerance(std::size_t n) { return 1e-10 * static_cast<double>(n); }

  static UnitaryMatrix certify(ComplexMatrix m) {
    if (!m.all_finite()) throw Error(ErrorCode::invalid_argument, "UnitaryMatrix: non-finite entry");
    const double defect = critzero::unitarity_defect(m);
    if (!(defect <= tolerance(m.size()))) {
      throw Error(ErrorCode::precision, "UnitaryMatrix: unitarity defect " + std::to_string(defect) +
                                            " exceeds " + std::to_string(tolerance(m.size())));
    }
    return UnitaryMatrix(std::move(m), defect);
  }

  std::size_t size() const noexcept { return m_.size(); }
  const ComplexMatrix& matrix() const noexcept { return m_; }
  double unitarity_defect() const noexcept { return defect_; }
  const cplx& operator()(std::size_t i, std::size_t j) const noexcept { return m_(i, j); }

 private:
  UnitaryMatrix(ComplexMatrix m, double defect) : m_(std::move(m)), defect_(defect) {}

  ComplexMatrix m_;
  double defect_;
};

inline constexpr double rank_threshold = 1e-30;

/// Haar phase correction: U = Q * diag(r_ii / |r_ii|) from a Householder QR of g.
inline UnitaryMatrix qr_haar_fix(const ComplexMatrix& g) {
  auto [q, r] = householder_qr(g);
  const std::size_t n = g.size();
  for (std::size_t j = 0; j < n; ++j) {
    const double a = std::abs(r(j, j));
    if (!(a > rank_threshold)) {
      throw Error(ErrorCode::degenerate_input, "qr_haar_fix: |r_" + std::to_string(j) + std::to_string(j) +
                                                   "| below rank threshold");
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    auto qi = q.row(i);
    for (std::size_t j = 0; j < n; ++j) qi[j] *= r(j, j) / std::abs(r(j, j));
  }
  return UnitaryMatrix::certify(std::move(q));
}

inline UnitaryMatrix haar_unitary(std::size_t n, SeedStream seed) { return qr_haar_fix(sample_ginibre(n, seed)); }

/// Unitary similarity to upper Hessenberg form (entries below the first
/// subdiagonal are set to zero).
inline ComplexMatrix hessenberg_reduce(ComplexMatrix h) {
  const std::size_t n = h.size();
  std::vector<cplx> w(n);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    std::vector<cplx> x(n - k - 1);
    for (std::size_t i = k + 1; i < n; ++i) x[i - k - 1] = h(i, k);
    const auto r = detail::make_reflector(std::move(x));
    if (r.beta == 0.0) continue;
    const std::size_t m = k + 1;

    // H <- P H on rows m..n-1
    std::fill(w.begin(), w.end(), cplx{});
    for (std::size_t i = m; i < n; ++i) {
      const cplx vi = std::conj(r.v[i - m]);
      const auto hi = h.row(i);
      for (std::size_t j = k + 1; j < n; ++j) w[j] += vi * hi[j];
    }
    for (std::size_t i = m; i < n; ++i) {
      const cplx vi = r.beta * r.v[i - m];
      auto hi = h.row(i);
      for (std::size_t j = k + 1; j < n; ++j) hi[j] -= vi * w[j];
    }
    h(m, k) = r.alpha;
    for (std::size_t i = m + 1; i < n; ++i) h(i, k) = 0.0;

    // H <- H P on columns m..n-1
    for (std::size_t i = 0; i < n; ++i) {
      auto hi = h.row(i);
      cplx s{};
      for (std::size_t j = m; j < n; ++j) s += hi[j] * r.v[j - m];
      s *= r.beta;
      for (std::size_t j = m; j < n; ++j) hi[j] -= s * std::conj(r.v[j - m]);
    }
  }
  return h;
}

namespace detail {

/// Eigenvalue of [[a, b], [c, d]] closest to d.
inline cplx wilkinson_shift(cplx a, cplx b, cplx c, cplx d) {
  const cplx t = 0.5 * (a - d);
  const cplx bc = b * c;
  cplx disc = std::sqrt(t * t + bc);
  if ((std::conj(t) * disc).real() < 0.0) disc = -disc;
  const cplx den = t + disc;
  if (std::abs(den) == 0.0) return d;
  return d - bc / den;
}

/// Both eigenvalues of [[a, b], [c, d]].
inline std::pair<cplx, cplx> eig2x2(cplx a, cplx b, cplx c, cplx d) {
  const cplx mu = wilkinson_shift(a, b, c, d);
  return {a + d - mu, mu};
}

struct Givens {
  double c = 1.0;
  cplx s;
};

/// Rotation [[c, s], [-conj(s), c]] mapping (f, g) to (r, 0).
inline Givens make_givens(cplx f, cplx g) {
  if (g == cplx{}) return {1.0, {}};
  const double af = std::abs(f);
  const double ag = std::abs(g);
  const double nrm = std::hypot(af, ag);
  if (af == 0.0) return {0.0, std::conj(g) / ag};
  return {af / nrm, (f / af) * std::conj(g) / nrm};
}

}  // namespace detail

/// Eigenvalues of an upper Hessenberg matrix by implicitly shifted QR with
/// Wilkinson shifts and deflation, eigenvalues only. Throws a convergence
/// error when the total sweep count exceeds 30 * n.
inline std::vector<cplx> hessenberg_eigenvalues(ComplexMatrix h) {
  const std::size_t n = h.size();
  std::vector<cplx> eig(n);
  constexpr double eps = std::numeric_limits<double>::epsilon();
  const double hnorm = std::max(max_abs_entry(h), std::numeric_limits<double>::min());
  const std::size_t budget = 30 * n;
  std::size_t sweeps = 0;
  std::size_t its = 0;

  std::ptrdiff_t hi = static_cast<std::ptrdiff_t>(n) - 1;
  while (hi >= 0) {
    const auto uhi = static_cast<std::size_t>(hi);
    std::size_t lo = uhi;
    while (lo > 0) {
      const double sub = std::abs(h(lo, lo - 1));
      double tst = std::abs(h(lo - 1, lo - 1)) + std::abs(h(lo, lo));
      if (tst == 0.0) tst = hnorm;
      if (sub <= eps * tst || sub <= std::numeric_limits<double>::min()) {
        h(lo, lo - 1) = 0.0;
        break;
      }
      --lo;
    }
    if (lo == uhi) {
      eig[uhi] = h(uhi, uhi);
      --hi;
      its = 0;
      continue;
    }
    if (lo + 1 == uhi) {
      const auto [l1, l2] = detail::eig2x2(h(lo, lo), h(lo, uhi), h(uhi, lo), h(uhi, uhi));
      eig[lo] = l1;
      eig[uhi] = l2;
      hi -= 2;
      its = 0;
      continue;
    }
    if (++sweeps > budget) {
      throw Error(ErrorCode::convergence, "hessenberg_eigenvalues: no deflation within " + std::to_string(budget) +
                                              " sweeps");
    }
    ++its;

    cplx mu;
    if (its % 10 == 0) {
      // exceptional shift
      mu = h(uhi, uhi) + 0.75 * std::abs(h(uhi, uhi - 1)) + 0.5 * std::abs(h(uhi - 1, uhi - 2));
    } else {
      mu = detail::wilkinson_shift(h(uhi - 1, uhi - 1), h(uhi - 1, uhi), h(uhi, uhi - 1), h(uhi, uhi));
    }

    // Bulge chase on the active block [lo, hi].
    for (std::size_t k = lo; k < uhi; ++k) {
      detail::Givens g;
      if (k == lo) {
        g = detail::make_givens(h(lo, lo) - mu, h(lo + 1, lo));
      } else {
        g = detail::make_givens(h(k, k - 1), h(k + 1, k - 1));
      }
      const cplx sc = std::conj(g.s);
      const std::size_t jstart = k == lo ? lo : k - 1;
      auto rk = h.row(k);
      auto rk1 = h.row(k + 1);
      for (std::size_t j = jstart; j <= uhi; ++j) {
        const cplx x = rk[j];
        const cplx y = rk1[j];
        rk[j] = g.c * x + g.s * y;
        rk1[j] = g.c * y - sc * x;
      }
      if (k > lo) h(k + 1, k - 1) = 0.0;
      const std::size_t iend = std::min(k + 2, uhi);
      for (std::size_t i = lo; i <= iend; ++i) {
        auto ri = h.row(i);
        const cplx x = ri[k];
        const cplx y = ri[k + 1];
        ri[k] = g.c * x + sc * y;
        ri[k + 1] = g.c * y - g.s * x;
      }
    }
  }
  return eig;
}

/// Eigenangles of a unitary matrix. Each raw eigenvalue must have modulus
/// within `tol` of 1 before it is projected onto the circle.
inline EigenAngleSpectrum eigenvalues_unitary(const UnitaryMatrix& u, double tol = 1e-6) {
  const auto raw = hessenberg_eigenvalues(hessenberg_reduce(u.matrix()));
  std::vector<double> angles;
  angles.reserve(raw.size());
  for (const auto& lambda : raw) {
    const double m = std::abs(lambda);
    if (!(std::abs(m - 1.0) <= tol)) {
      throw Error(ErrorCode::precision, "eigenvalues_unitary: eigenvalue modulus " + std::to_string(m) +
                                            " deviates from 1 by more than tolerance");
    }
    angles.push_back(std::arg(lambda / m));
  }
  return EigenAngleSpectrum::from_angles(std::move(angles));
}

}  // namespace critzero
