#pragma once

#include "gausswave/errors.hpp"
#include "gausswave/types.hpp"

namespace gw {

// Lattice Gaussian sums over Z^n with offset eps0 and width lambda >= 1:
//   theta_sum:          sum exp(-|a - eps0|^2 / lambda)
//   weighted_theta_sum: sum (|a - eps0|^2 / lambda) exp(-|a - eps0|^2 / lambda)
// Both are truncated with tail below 1e-12.
struct ThetaParams {
  Vec eps0;
  double lambda = 1.0;
  int n = 1;

  void validate() const;
};

double theta_sum(const ThetaParams& p);
double weighted_theta_sum(const ThetaParams& p);

// Euler-summation diagnostic for one coordinate: returns
// |sum - integral| and the remainder bound sqrt(pi / 2 lambda).
struct EulerRemainder {
  double deviation;
  double bound;
};
EulerRemainder euler_remainder_check(double eps0, double lambda);

} // namespace gw
