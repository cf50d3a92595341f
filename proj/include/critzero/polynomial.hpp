#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "critzero/errors.hpp"
#include "critzero/precision.hpp"

namespace critzero {

/// Dense polynomial with complex coefficients in ascending degree, at the
/// working precision of Real. The only polynomial allowed a zero leading
/// coefficient is the degenerate zero polynomial produced by differentiating
/// a constant.
template <class Real>
class Polynomial {
 public:
  using real_type = Real;
  using complex_type = complex_t<Real>;
  static constexpr unsigned precision_bits = precision_bits_v<Real>;

  explicit Polynomial(std::vector<complex_type> coeffs) : coeffs_(std::move(coeffs)) {
    using std::isfinite;
    if (coeffs_.empty()) throw Error(ErrorCode::invalid_argument, "Polynomial: no coefficients");
    for (const auto& c : coeffs_) {
      if (!isfinite(real(c)) || !isfinite(imag(c))) {
        throw Error(ErrorCode::invalid_argument, "Polynomial: non-finite coefficient");
      }
    }
    if (coeffs_.back() == complex_type(0)) {
      throw Error(ErrorCode::invalid_argument, "Polynomial: leading coefficient is zero");
    }
  }

  static Polynomial zero() {
    Polynomial p;
    p.coeffs_.assign(1, complex_type(0));
    p.degenerate_ = true;
    return p;
  }

  std::size_t degree() const noexcept { return coeffs_.size() - 1; }
  bool degenerate() const noexcept { return degenerate_; }
  const std::vector<complex_type>& coeffs() const noexcept { return coeffs_; }
  const complex_type& operator[](std::size_t i) const { return coeffs_[i]; }

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.degenerate_ == b.degenerate_ && a.coeffs_ == b.coeffs_;
  }

 private:
  Polynomial() = default;

  std::vector<complex_type> coeffs_;
  bool degenerate_ = false;
};

/// Monic product of (x - r) over the roots, expanded at the precision of Real.
template <class Real, class RootComplex>
Polynomial<Real> poly_from_roots(std::span<const RootComplex> roots) {
  using C = complex_t<Real>;
  std::vector<C> c(roots.size() + 1, C(0));
  c[0] = C(1);
  std::size_t deg = 0;
  for (const auto& rr : roots) {
    C r;
    if constexpr (std::is_same_v<RootComplex, C>) {
      r = rr;
    } else {
      r = C(Real(rr.real()), Real(rr.imag()));
    }
    ++deg;
    c[deg] = c[deg - 1];
    for (std::size_t i = deg - 1; i > 0; --i) c[i] = c[i - 1] - r * c[i];
    c[0] = -r * c[0];
  }
  return Polynomial<Real>(std::move(c));
}

template <class Real, class RootComplex>
Polynomial<Real> poly_from_roots(const std::vector<RootComplex>& roots) {
  return poly_from_roots<Real>(std::span<const RootComplex>(roots));
}

/// Formal derivative. A constant differentiates to the degenerate zero polynomial.
template <class Real>
Polynomial<Real> differentiate(const Polynomial<Real>& p) {
  using C = complex_t<Real>;
  if (p.degree() == 0) return Polynomial<Real>::zero();
  std::vector<C> d(p.degree());
  for (std::size_t i = 1; i <= p.degree(); ++i) d[i - 1] = p[i] * Real(static_cast<double>(i));
  return Polynomial<Real>(std::move(d));
}

/// Horner evaluation.
template <class Real>
complex_t<Real> evaluate(const Polynomial<Real>& p, const complex_t<Real>& z) {
  const auto& c = p.coeffs();
  complex_t<Real> acc = c.back();
  for (std::size_t i = c.size() - 1; i-- > 0;) acc = acc * z + c[i];
  return acc;
}

template <class Real>
struct ValueAndDerivative {
  complex_t<Real> value;
  complex_t<Real> derivative;
};

/// Horner evaluation of p and p' together.
template <class Real>
ValueAndDerivative<Real> evaluate_with_derivative(const Polynomial<Real>& p, const complex_t<Real>& z) {
  const auto& c = p.coeffs();
  complex_t<Real> v = c.back();
  complex_t<Real> d(0);
  for (std::size_t i = c.size() - 1; i-- > 0;) {
    d = d * z + v;
    v = v * z + c[i];
  }
  return {v, d};
}

/// Synthetic division by a monic divisor; returns quotient and remainder
/// coefficients (ascending).
template <class Real>
std::pair<std::vector<complex_t<Real>>, std::vector<complex_t<Real>>> divide_monic(
    std::span<const complex_t<Real>> num, std::span<const complex_t<Real>> monic_divisor) {
  using C = complex_t<Real>;
  const std::size_t dn = num.size() - 1;
  const std::size_t dd = monic_divisor.size() - 1;
  if (monic_divisor.back() != C(1)) throw Error(ErrorCode::invalid_argument, "divide_monic: divisor not monic");
  if (dd > dn) return {{C(0)}, {num.begin(), num.end()}};
  std::vector<C> rem(num.begin(), num.end());
  std::vector<C> quot(dn - dd + 1, C(0));
  for (std::size_t k = dn - dd + 1; k-- > 0;) {
    const C q = rem[k + dd];
    quot[k] = q;
    for (std::size_t j = 0; j <= dd; ++j) rem[k + j] -= q * monic_divisor[j];
  }
  rem.resize(dd == 0 ? 1 : dd);
  return {std::move(quot), std::move(rem)};
}

}  // namespace critzero
