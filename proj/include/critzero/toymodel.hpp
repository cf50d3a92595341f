#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "critzero/aberth.hpp"
#include "critzero/bracket.hpp"
#include "critzero/errors.hpp"
#include "critzero/polynomial.hpp"
#include "critzero/precision.hpp"

// Excised roots of unity: f_n(x) = (x^n - 1) / (1 - 2 cos(2 pi/n) x + x^2),
// the n-th roots of unity with exp(+-2 pi i/n) removed, so the zeros around
// x = 1 have two consecutive gaps of twice the mean.

namespace critzero::toy {

inline void require_n(std::size_t n, std::size_t min_n, const char* what) {
  if (n < min_n) {
    throw Error(ErrorCode::invalid_argument, std::string(what) + ": need n >= " + std::to_string(min_n));
  }
}

template <class Real>
Real cos_two_pi_over(std::size_t n) {
  using std::cos;
  return cos(2 * pi_v<Real>() / Real(static_cast<double>(n)));
}

/// Largest remainder magnitude tolerated by build_fn.
inline constexpr double division_tol = 1e-25;

/// f_n by synthetic division of x^n - 1 by x^2 - 2 cos(2 pi/n) x + 1.
template <class Real>
Polynomial<Real> build_fn(std::size_t n) {
  require_n(n, 4, "build_fn");
  using C = complex_t<Real>;
  using std::abs;
  std::vector<C> num(n + 1, C(0));
  num[0] = C(-1);
  num[n] = C(1);
  const Real c = cos_two_pi_over<Real>(n);
  const std::vector<C> divisor{C(1), C(Real(-2) * c), C(1)};
  auto [quot, rem] = divide_monic<Real>(num, divisor);
  double worst = 0.0;
  for (const auto& r : rem) worst = std::max(worst, to_double(abs(r)));
  if (!(worst <= division_tol)) {
    throw Error(ErrorCode::construction,
                "build_fn: division remainder " + std::to_string(worst) + " for n = " + std::to_string(n));
  }
  return Polynomial<Real>(std::move(quot));
}

/// Remainder magnitude of the division performed by build_fn.
template <class Real>
double build_fn_remainder(std::size_t n) {
  using C = complex_t<Real>;
  using std::abs;
  std::vector<C> num(n + 1, C(0));
  num[0] = C(-1);
  num[n] = C(1);
  const Real c = cos_two_pi_over<Real>(n);
  const std::vector<C> divisor{C(1), C(Real(-2) * c), C(1)};
  const auto rem = divide_monic<Real>(num, divisor).second;
  double worst = 0.0;
  for (const auto& r : rem) worst = std::max(worst, to_double(abs(r)));
  return worst;
}

/// F_n(x) = -2c + 2x + n x^(n-1) + 2c(1-n) x^n - (2-n) x^(n+1), c = cos(2 pi/n),
/// whose zeros are those of f_n' together with the excised pair, each doubled.
template <class Scalar, class Real>
Scalar eval_Fn_generic(std::size_t n, const Scalar& x, const Real& c) {
  const Real nn(static_cast<double>(n));
  Scalar xp = x;  // x^(n-1)
  Scalar acc = Scalar(1);
  std::size_t e = n - 1;
  while (e > 0) {
    if (e & 1u) acc = acc * xp;
    xp = xp * xp;
    e >>= 1u;
  }
  const Scalar xn1 = acc;
  const Scalar xn = xn1 * x;
  const Scalar xn2 = xn * x;
  return Scalar(Real(-2) * c) + Real(2) * x + nn * xn1 + (Real(2) * c * (Real(1) - nn)) * xn -
         (Real(2) - nn) * xn2;
}

template <class Real>
complex_t<Real> eval_Fn(std::size_t n, const complex_t<Real>& x) {
  require_n(n, 4, "eval_Fn");
  return eval_Fn_generic(n, x, cos_two_pi_over<Real>(n));
}

template <class Real>
Real eval_Fn_real(std::size_t n, const Real& x) {
  require_n(n, 4, "eval_Fn");
  return eval_Fn_generic(n, x, cos_two_pi_over<Real>(n));
}

/// F_n as a coefficient polynomial of degree n + 1.
template <class Real>
Polynomial<Real> fn_criterion_poly(std::size_t n) {
  require_n(n, 4, "fn_criterion_poly");
  using C = complex_t<Real>;
  const Real c = cos_two_pi_over<Real>(n);
  const Real nn(static_cast<double>(n));
  std::vector<C> k(n + 2, C(0));
  k[0] = C(Real(-2) * c);
  k[1] = C(Real(2));
  k[n - 1] += C(nn);
  k[n] += C(Real(2) * c * (Real(1) - nn));
  k[n + 1] = C(nn - Real(2));
  return Polynomial<Real>(std::move(k));
}

/// q(x) = 1 - 2 cos(2 pi/n) x + x^2, so that f_n' = F_n / q^2.
template <class Real>
Real excised_quadratic(std::size_t n, const Real& x) {
  return Real(1) - Real(2) * cos_two_pi_over<Real>(n) * x + x * x;
}

/// g(b) = 4 pi^2 + 2b + b^2 - 2b e^b.
inline double g_b0(double b) {
  constexpr double pi = std::numbers::pi;
  return 4.0 * pi * pi + 2.0 * b + b * b - 2.0 * b * std::exp(b);
}

inline double g_b0_slope(double b) { return 2.0 + 2.0 * b - 2.0 * std::exp(b) - 2.0 * b * std::exp(b); }

/// b0 = 2.3565..., the unique real root of g.
inline double solve_b0() {
  return solve_real_root_bracketed(
      [](double b) { return ValueAndSlope<double>{g_b0(b), g_b0_slope(b)}; }, 2.0, 3.0, 1e-12);
}

/// Coefficient of 1/n in the expansion of F_n(1 - b/n).
inline double expansion_first_coefficient(double b) { return std::exp(-b) * g_b0(b); }

/// Coefficient of 1/n^2 in the expansion of F_n(1 - b/n).
inline double expansion_second_coefficient(double b) {
  constexpr double pi = std::numbers::pi;
  const double pi2 = pi * pi;
  return std::exp(-b) * (-b * b * b * b - 8.0 * pi2 - 4.0 * b * b * pi2 + 8.0 * std::exp(b) * pi2) / 2.0;
}

/// Two-term asymptotic value of F_n(1 - b/n).
inline double eval_expansion(std::size_t n, double b) {
  require_n(n, 4, "eval_expansion");
  const double nn = static_cast<double>(n);
  return expansion_first_coefficient(b) / nn + expansion_second_coefficient(b) / (nn * nn);
}

struct ToyResult {
  std::size_t n = 0;
  double root = 0.0;       // real zero of F_n in (0, 1)
  double predicted = 0.0;  // 1 - b0/n
  double error = 0.0;      // |root - predicted|
  double derivative_residual = 0.0;  // |f_n'(root)|
};

/// Locates the real critical point of f_n in (0, 1) at n + 64 bits and
/// compares it with 1 - b0/n.
inline ToyResult verify_proposition(std::size_t n) {
  require_n(n, 10, "verify_proposition");
  const double b0 = solve_b0();
  return with_precision(default_precision_bits(n), [&](auto tag) {
    using Real = typename decltype(tag)::type;
    using std::abs;
    auto F = [n](const Real& x) {
      const Real c = cos_two_pi_over<Real>(n);
      const Real nn(static_cast<double>(n));
      using std::pow;
      const Real value = eval_Fn_generic(n, x, c);
      const Real slope = Real(2) + nn * (nn - 1) * pow(x, static_cast<int>(n) - 2) +
                         Real(2) * c * (Real(1) - nn) * nn * pow(x, static_cast<int>(n) - 1) +
                         (nn - 2) * (nn + 1) * pow(x, static_cast<int>(n));
      return ValueAndSlope<Real>{value, slope};
    };
    Real root;
    try {
      root = solve_real_root_bracketed(F, Real(0), Real(1), Real(1e-30));
    } catch (const Error& e) {
      throw Error(ErrorCode::proposition_check,
                  "verify_proposition: no bracketed root for n = " + std::to_string(n) + ": " + e.what());
    }
    if (!(root > Real(0) && root < Real(1))) {
      throw Error(ErrorCode::proposition_check, "verify_proposition: root outside (0, 1)");
    }
    const Real q = excised_quadratic<Real>(n, root);
    ToyResult r;
    r.n = n;
    r.root = to_double(root);
    r.predicted = 1.0 - b0 / static_cast<double>(n);
    r.error = to_double(abs(root - (Real(1) - Real(b0) / Real(static_cast<double>(n)))));
    r.derivative_residual = to_double(abs(eval_Fn_real<Real>(n, root) / (q * q)));
    return r;
  });
}

/// Zeros of f_n: the n-th roots of unity without exp(+-2 pi i/n).
inline std::vector<std::complex<double>> fn_zeros(std::size_t n) {
  require_n(n, 4, "fn_zeros");
  std::vector<std::complex<double>> z;
  for (std::size_t k = 0; k < n; ++k) {
    if (k == 1 || k == n - 1) continue;
    z.push_back(std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n)));
  }
  return z;
}

/// Zeros of f_n' from the coefficient route at n + 64 bits.
inline std::vector<std::complex<double>> fn_derivative_zeros(std::size_t n, const AberthOptions& opts = {}) {
  require_n(n, 4, "fn_derivative_zeros");
  return with_precision(default_precision_bits(n), [&](auto tag) {
    using Real = typename decltype(tag)::type;
    const auto rs = find_roots_aberth(differentiate(build_fn<Real>(n)), opts);
    std::vector<std::complex<double>> out;
    for (const auto& z : rs.roots) out.push_back(to_cplx(z));
    return out;
  });
}

struct ModifiedToyResult {
  std::size_t n = 0;
  double c_plus = 0.0;
  double c_minus = 0.0;
  std::complex<double> root;  // derivative zero nearest 1 - 2.6/n
  double distance = 0.0;      // |root - (1 - 2.6/n)|
  bool within = false;        // distance <= 0.8/n
};

/// Zeros of the modified toy: roots of unity without exp(+-2 pi i/n), with
/// exp(+-4 pi i/n) moved to exp(2 pi i c_plus/n) and exp(2 pi i c_minus/n).
template <class Real>
std::vector<complex_t<Real>> modified_toy_zeros(std::size_t n, double c_plus, double c_minus) {
  using C = complex_t<Real>;
  using std::cos;
  using std::sin;
  const Real two_pi_n = 2 * pi_v<Real>() / Real(static_cast<double>(n));
  std::vector<C> z;
  z.reserve(n - 2);
  auto on_circle = [&](const Real& k) { return C(cos(two_pi_n * k), sin(two_pi_n * k)); };
  for (std::size_t k = 0; k < n; ++k) {
    if (k == 1 || k == n - 1 || k == 2 || k == n - 2) continue;
    z.push_back(on_circle(Real(static_cast<double>(k))));
  }
  z.push_back(on_circle(Real(c_plus)));
  z.push_back(on_circle(Real(c_minus)));
  return z;
}

/// Derivative zero of the modified toy nearest 1 - 2.6/n; a miss of the
/// 0.8/n radius is reported through `within`, never thrown.
inline ModifiedToyResult run_modified_toy(std::size_t n, double c_plus, double c_minus,
                                          const AberthOptions& opts = {}) {
  require_n(n, 10, "run_modified_toy");
  if (!(c_plus > 1.0 && c_plus < 3.0) || !(c_minus > -3.0 && c_minus < -1.0)) {
    throw Error(ErrorCode::invalid_argument, "run_modified_toy: need 1 < c_plus < 3 and -3 < c_minus < -1");
  }
  const auto roots = with_precision(default_precision_bits(n), [&](auto tag) {
    using Real = typename decltype(tag)::type;
    const auto zs = modified_toy_zeros<Real>(n, c_plus, c_minus);
    const auto p = poly_from_roots<Real>(zs);
    const auto rs = find_roots_aberth(differentiate(p), opts);
    std::vector<std::complex<double>> out;
    for (const auto& z : rs.roots) out.push_back(to_cplx(z));
    return out;
  });
  const double nn = static_cast<double>(n);
  const std::complex<double> target(1.0 - 2.6 / nn, 0.0);
  ModifiedToyResult r;
  r.n = n;
  r.c_plus = c_plus;
  r.c_minus = c_minus;
  r.distance = std::numeric_limits<double>::infinity();
  for (const auto& z : roots) {
    const double d = std::abs(z - target);
    if (d < r.distance) {
      r.distance = d;
      r.root = z;
    }
  }
  r.within = r.distance <= 0.8 / nn;
  return r;
}

/// `points` evenly spaced values from lo + 0.1 (hi - lo) to hi - 0.1 (hi - lo);
/// five points on (1, 3) give {1.2, 1.6, 2.0, 2.4, 2.8}.
inline std::vector<double> interior_grid(double lo, double hi, std::size_t points) {
  std::vector<double> out(points);
  if (points == 1) {
    out[0] = 0.5 * (lo + hi);
    return out;
  }
  const double margin = 0.1 * (hi - lo);
  for (std::size_t i = 0; i < points; ++i) {
    out[i] = lo + margin + (hi - lo - 2.0 * margin) * static_cast<double>(i) / static_cast<double>(points - 1);
  }
  return out;
}

}  // namespace critzero::toy
