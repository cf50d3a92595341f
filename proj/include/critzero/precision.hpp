#pragma once

#include <complex>
#include <limits>
#include <string>
#include <type_traits>

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>

#include "critzero/errors.hpp"

namespace critzero {

namespace bmp = boost::multiprecision;

template <unsigned Bits>
using mp_real = bmp::number<bmp::cpp_bin_float<Bits, bmp::digit_base_2>, bmp::et_off>;

template <unsigned Bits>
using mp_complex = bmp::number<bmp::complex_adaptor<bmp::cpp_bin_float<Bits, bmp::digit_base_2>>, bmp::et_off>;

template <class Real>
struct scalar_traits;

template <>
struct scalar_traits<double> {
  using complex = std::complex<double>;
};

template <unsigned Bits>
struct scalar_traits<mp_real<Bits>> {
  using complex = mp_complex<Bits>;
};

template <class Real>
using complex_t = typename scalar_traits<Real>::complex;

/// Mantissa bits of a real scalar type.
template <class Real>
inline constexpr unsigned precision_bits_v = static_cast<unsigned>(std::numeric_limits<Real>::digits);

template <class Real>
Real pi_v() {
  if constexpr (std::is_same_v<Real, double>) {
    return 3.141592653589793238462643383279502884;
  } else {
    return boost::math::constants::pi<Real>();
  }
}

template <class Real>
double to_double(const Real& x) {
  return static_cast<double>(x);
}

template <class Complex>
std::complex<double> to_cplx(const Complex& z) {
  using std::imag;
  using std::real;
  return {static_cast<double>(real(z)), static_cast<double>(imag(z))};
}

/// Working-precision tiers, in mantissa bits. A request is served by the
/// smallest tier that covers it.
inline constexpr unsigned precision_tiers[] = {53, 128, 256, 512, 1024};

inline unsigned effective_precision(unsigned requested_bits) {
  for (const unsigned t : precision_tiers) {
    if (requested_bits <= t) return t;
  }
  throw Error(ErrorCode::invalid_argument,
              "precision of " + std::to_string(requested_bits) + " bits exceeds the largest tier (1024)");
}

/// Calls f(std::type_identity<Real>{}) with the real type of the tier that
/// covers `requested_bits`. Every branch must return the same type.
template <class F>
decltype(auto) with_precision(unsigned requested_bits, F&& f) {
  switch (effective_precision(requested_bits)) {
    case 53: return f(std::type_identity<double>{});
    case 128: return f(std::type_identity<mp_real<128>>{});
    case 256: return f(std::type_identity<mp_real<256>>{});
    case 512: return f(std::type_identity<mp_real<512>>{});
    default: return f(std::type_identity<mp_real<1024>>{});
  }
}

/// Default coefficient-route precision at degree n: coefficients of a degree-n
/// unitary polynomial are bounded by binomial coefficients, at most 2^n.
inline unsigned default_precision_bits(std::size_t degree) { return static_cast<unsigned>(degree) + 64; }

}  // namespace critzero
