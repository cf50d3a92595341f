#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <type_traits>
#include <utility>

#include "critzero/errors.hpp"
#include "critzero/precision.hpp"

namespace critzero {

template <class Real>
struct ValueAndSlope {
  Real value;
  Real slope;
};

/// Root of f on [a, b] given f(a) * f(b) < 0, by Newton steps safeguarded
/// with bisection. f may return a plain value, in which case the secant
/// through the current bracket stands in for the slope, or a ValueAndSlope.
/// Returns x in [a, b] with |f(x)| <= tol.
template <class Real, class F>
Real solve_real_root_bracketed(F&& f, Real a, Real b, Real tol) {
  using std::abs;
  using Result = std::invoke_result_t<F&, const Real&>;
  constexpr bool has_slope = !std::is_convertible_v<Result, Real>;

  auto eval = [&](const Real& x) -> ValueAndSlope<Real> {
    if constexpr (has_slope) {
      const auto r = f(x);
      return {Real(r.value), Real(r.slope)};
    } else {
      return {Real(f(x)), Real(0)};
    }
  };

  if (a > b) std::swap(a, b);
  const Real fa = eval(a).value;
  const Real fb = eval(b).value;
  if (fa == Real(0)) return a;
  if (fb == Real(0)) return b;
  if (!(fa * fb < Real(0))) {
    throw Error(ErrorCode::bracket, "solve_real_root_bracketed: f(a) and f(b) do not differ in sign");
  }

  // Orient so that f(lo) < 0 < f(hi).
  Real lo = fa < Real(0) ? a : b;
  Real hi = fa < Real(0) ? b : a;
  Real flo = fa < Real(0) ? fa : fb;
  Real fhi = fa < Real(0) ? fb : fa;

  Real x = (a + b) / 2;
  Real dx_old = abs(b - a);
  Real dx = dx_old;
  const int max_iters = 2 * static_cast<int>(precision_bits_v<Real>) + 64;
  const Real eps = std::numeric_limits<Real>::epsilon();

  for (int it = 0; it < max_iters; ++it) {
    auto [fx, slope] = eval(x);
    if (abs(fx) <= tol) return x;
    if (fx < Real(0)) {
      lo = x;
      flo = fx;
    } else {
      hi = x;
      fhi = fx;
    }
    if constexpr (!has_slope) slope = (fhi - flo) / (hi - lo);

    const bool newton_leaves = ((x - hi) * slope - fx) * ((x - lo) * slope - fx) > Real(0);
    const bool newton_slow = abs(2 * fx) > abs(dx_old * slope);
    dx_old = dx;
    if (slope == Real(0) || newton_leaves || newton_slow) {
      dx = (hi - lo) / 2;
      x = lo + dx;
    } else {
      dx = fx / slope;
      x -= dx;
    }
    if (abs(hi - lo) <= 4 * eps * (abs(lo) + abs(hi))) break;
  }
  const Real fx = eval(x).value;
  if (abs(fx) <= tol) return x;
  throw Error(ErrorCode::convergence, "solve_real_root_bracketed: bracket collapsed with |f| = " +
                                          std::to_string(to_double(abs(fx))) + " above tolerance");
}

}  // namespace critzero
