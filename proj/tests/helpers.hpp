#pragma once

#include <random>

#include "gausswave/atoms.hpp"
#include "gausswave/quadrature.hpp"

namespace gw::testing {

inline Vec vec1(double a) {
  Vec v(1);
  v << a;
  return v;
}

inline Vec vec2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

// Quadrature oracle for inner products of 1-D Gaussian packets; independent
// of the closed forms (uses pointwise evaluation only).
inline Complex packet_inner_oracle(const GaussianPacket& g1,
                                   const GaussianPacket& g2,
                                   double tol = 1e-11) {
  const auto eval = [](const GaussianPacket& g, double x) {
    const double d = x - g.center(0);
    return g.amplitude * std::exp(kI * g.frequency(0) * d - g.width * d * d);
  };
  const double lo = std::min(g1.center(0) - 8.0 / std::sqrt(g1.width),
                             g2.center(0) - 8.0 / std::sqrt(g2.width));
  const double hi = std::max(g1.center(0) + 8.0 / std::sqrt(g1.width),
                             g2.center(0) + 8.0 / std::sqrt(g2.width));
  return integrate_gk(
      [&](double x) { return std::conj(eval(g1, x)) * eval(g2, x); }, lo, hi, tol);
}

inline GaussianMixture single_packet(double amp_re, double amp_im, double y,
                                     double eta, double w) {
  GaussianMixture f;
  GaussianPacket p;
  p.amplitude = Complex(amp_re, amp_im);
  p.center = vec1(y);
  p.frequency = vec1(eta);
  p.width = w;
  f.terms.push_back(p);
  return f;
}

} // namespace gw::testing
