#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "critzero/errors.hpp"

namespace critzero {

using cplx = std::complex<double>;

/// Dense square complex matrix, row-major.
class ComplexMatrix {
 public:
  explicit ComplexMatrix(std::size_t n) : n_(n), entries_(n * n) {
    if (n == 0) throw Error(ErrorCode::invalid_dimension, "ComplexMatrix: dimension must be >= 1");
  }

  static ComplexMatrix identity(std::size_t n) {
    ComplexMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  static ComplexMatrix diagonal(std::span<const cplx> d) {
    ComplexMatrix m(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }

  std::size_t size() const noexcept { return n_; }

  cplx& operator()(std::size_t i, std::size_t j) noexcept { return entries_[i * n_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const noexcept { return entries_[i * n_ + j]; }

  std::span<cplx> row(std::size_t i) noexcept { return {entries_.data() + i * n_, n_}; }
  std::span<const cplx> row(std::size_t i) const noexcept { return {entries_.data() + i * n_, n_}; }

  std::span<const cplx> entries() const noexcept { return entries_; }

  bool all_finite() const noexcept {
    for (const auto& z : entries_) {
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    }
    return true;
  }

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  std::size_t n_;
  std::vector<cplx> entries_;
};

inline ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  const std::size_t n = a.size();
  if (b.size() != n) throw Error(ErrorCode::invalid_dimension, "matrix product: size mismatch");
  ComplexMatrix c(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto ci = c.row(i);
    for (std::size_t k = 0; k < n; ++k) {
      const cplx aik = a(i, k);
      const auto bk = b.row(k);
      for (std::size_t j = 0; j < n; ++j) ci[j] += aik * bk[j];
    }
  }
  return c;
}

inline ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (b.size() != a.size()) throw Error(ErrorCode::invalid_dimension, "matrix difference: size mismatch");
  ComplexMatrix c(a);
  for (std::size_t i = 0; i < a.size(); ++i) {
    auto ci = c.row(i);
    const auto bi = b.row(i);
    for (std::size_t j = 0; j < a.size(); ++j) ci[j] -= bi[j];
  }
  return c;
}

inline ComplexMatrix adjoint(const ComplexMatrix& a) {
  const std::size_t n = a.size();
  ComplexMatrix h(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) h(j, i) = std::conj(a(i, j));
  }
  return h;
}

inline double max_abs_entry(const ComplexMatrix& a) {
  double m = 0.0;
  for (const auto& z : a.entries()) m = std::max(m, std::abs(z));
  return m;
}

}  // namespace critzero
