#pragma once

#include <array>
#include <cmath>
#include <functional>

#include "gausswave/types.hpp"

namespace gw {

// Adaptive Gauss-Kronrod (G7/K15) on [a,b] for complex-valued integrands.
// Serves as the independent reference for every closed-form Gaussian
// integral in this library; it never calls back into the closed forms.
namespace detail {

// 15-point Kronrod nodes/weights on [-1,1] with the embedded 7-point Gauss rule.
inline constexpr std::array<double, 15> kKronrodNodes = {
    -0.991455371120813, -0.949107912342759, -0.864864423359769,
    -0.741531185599394, -0.586087235467691, -0.405845151377397,
    -0.207784955007898, 0.0,                0.207784955007898,
    0.405845151377397,  0.586087235467691,  0.741531185599394,
    0.864864423359769,  0.949107912342759,  0.991455371120813};

inline constexpr std::array<double, 15> kKronrodWeights = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728, 0.204432940075298,
    0.190350578064785, 0.169004726639267, 0.140653259715525,
    0.104790010322250, 0.063092092629979, 0.022935322010529};

inline constexpr std::array<double, 7> kGaussWeights = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469, 0.381830050505119, 0.279705391489277,
    0.129484966168870};

} // namespace detail

template <typename F>
inline void gk15_panel(const F& f, double a, double b, Complex& value, double& error) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  Complex kronrod{0.0, 0.0};
  Complex gauss{0.0, 0.0};
  for (int j = 0; j < 15; ++j) {
    const Complex fx = f(mid + half * detail::kKronrodNodes[j]);
    kronrod += detail::kKronrodWeights[j] * fx;
    if (j % 2 == 1) gauss += detail::kGaussWeights[j / 2] * fx;
  }
  value = half * kronrod;
  error = std::abs(half * (kronrod - gauss));
}

// Bisects panels until the summed error estimate is below tol (absolute,
// mixed with relative once the running value is O(1)).
template <typename F>
inline Complex integrate_gk(const F& f, double a, double b, double tol = 1e-12,
                            int max_depth = 24) {
  // Explicit recursion keeps the error budget per subtree.
  std::function<Complex(double, double, double, int)> rec =
      [&](double lo, double hi, double budget, int depth) -> Complex {
    Complex v;
    double e;
    gk15_panel(f, lo, hi, v, e);
    if (e <= budget || depth >= max_depth) return v;
    const double m = 0.5 * (lo + hi);
    return rec(lo, m, 0.5 * budget, depth + 1) + rec(m, hi, 0.5 * budget, depth + 1);
  };
  return rec(a, b, tol, 0);
}

// Iterated (tensor) integral over [ax,bx] x [ay,by] for n=2 oracles.
template <typename F2>
inline Complex integrate_gk_2d(const F2& f, double ax, double bx, double ay, double by,
                               double tol = 1e-10) {
  const auto outer = [&](double x) {
    return integrate_gk([&](double y) { return f(x, y); }, ay, by, tol * 0.1);
  };
  return integrate_gk(outer, ax, bx, tol);
}

} // namespace gw
