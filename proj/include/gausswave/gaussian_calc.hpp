#pragma once

#include "gausswave/errors.hpp"
#include "gausswave/types.hpp"

namespace gw {

// Parameters of the basic oscillatory Gaussian integrals
//   int exp(i y.eta) exp(-c |y|^2) dy          (and first / second moments
//   of y+b against the same weight) over R^n.
struct GaussianIntegralParams {
  double c = 1.0;  // quadratic decay, > 0
  Vec eta;         // oscillation vector
  Vec b;           // moment shift
  int n = 1;

  void validate() const;
};

// (pi/c)^{n/2} exp(-|eta|^2 / 4c)
double gauss_fourier(const GaussianIntegralParams& p);

// (pi/c)^{n/2} exp(-|eta|^2 / 4c) (i eta / 2c + b), componentwise
CVec gauss_first_moment(const GaussianIntegralParams& p);

// (pi/c)^{n/2} exp(-|eta|^2/4c) (-|eta|^2/4c^2 + i b.eta / c + |b|^2 + n/2c).
// The trace term carries the dimension factor n, not the 1-D value.
Complex gauss_second_moment(const GaussianIntegralParams& p);

// A complex Gaussian packet A exp(i eta.(x-y) - w |x-y|^2). Frame atoms,
// mixture terms and propagated beams are all of this shape.
struct GaussianPacket {
  Complex amplitude{1.0, 0.0};
  Vec center;      // y
  Vec frequency;   // eta
  double width = 1.0;  // w > 0
};

// Canonical single-Gaussian form of conj(g1) * g2:
//   prefactor * exp(i osc.(x - center) + i const_phase - decay |x - center|^2)
struct GaussianProduct {
  Complex prefactor;  // amplitudes and the cross-decay term folded in
  Vec center;         // decay-weighted center
  double decay;       // w1 + w2
  Vec osc;            // eta2 - eta1
  double const_phase; // phase accumulated at x = center
};

GaussianProduct gauss_pair_product(const GaussianPacket& g1, const GaussianPacket& g2);

// int conj(g1) g2 dx in closed form (completes the square and applies
// gauss_fourier to the canonical product).
Complex packet_inner_product(const GaussianPacket& g1, const GaussianPacket& g2);

} // namespace gw
