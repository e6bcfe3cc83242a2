#include "gausswave/theta.hpp"

#include <cmath>

namespace gw {

namespace {

// Radius so the dropped tail of a 1-D theta sum is below 1e-12 of the
// (2 pi lambda)^{n/2} scale.
int truncation_radius(double lambda, int n) {
  const double scale = 1e12 * std::pow(2.0 * M_PI * lambda, 0.5 * n);
  return static_cast<int>(std::ceil(std::sqrt(lambda * std::log(scale)))) + 1;
}

// One-coordinate sums; the n-dimensional sums factor through these.
double theta_sum_1d(double eps0, double lambda, int radius) {
  const double frac = eps0 - std::floor(eps0);
  double s = 0.0;
  for (int a = -radius; a <= radius; ++a) {
    const double d = a - frac;
    s += std::exp(-d * d / lambda);
  }
  return s;
}

double weighted_theta_sum_1d(double eps0, double lambda, int radius) {
  const double frac = eps0 - std::floor(eps0);
  double s = 0.0;
  for (int a = -radius; a <= radius; ++a) {
    const double r2 = (a - frac) * (a - frac) / lambda;
    s += r2 * std::exp(-r2);
  }
  return s;
}

} // namespace

void ThetaParams::validate() const {
  if (lambda < 1.0) throw DomainError("theta sums require lambda >= 1");
  if (n < 1 || (eps0.size() && eps0.size() != n))
    throw DomainError("theta sum offset dimension mismatch");
}

double theta_sum(const ThetaParams& p) {
  p.validate();
  const int radius = truncation_radius(p.lambda, p.n);
  double prod = 1.0;
  for (int j = 0; j < p.n; ++j) {
    const double e = p.eps0.size() ? p.eps0(j) : 0.0;
    prod *= theta_sum_1d(e, p.lambda, radius);
  }
  return prod;
}

double weighted_theta_sum(const ThetaParams& p) {
  p.validate();
  const int radius = truncation_radius(p.lambda, p.n);
  // |a - eps0|^2 splits per coordinate, so the weighted sum is a sum of
  // one weighted factor times the plain theta sums of the remaining axes.
  double total = 0.0;
  for (int j = 0; j < p.n; ++j) {
    double term = weighted_theta_sum_1d(p.eps0.size() ? p.eps0(j) : 0.0,
                                        p.lambda, radius);
    for (int l = 0; l < p.n; ++l) {
      if (l == j) continue;
      term *= theta_sum_1d(p.eps0.size() ? p.eps0(l) : 0.0, p.lambda, radius);
    }
    total += term;
  }
  return total;
}

EulerRemainder euler_remainder_check(double eps0, double lambda) {
  const int radius = truncation_radius(lambda, 1);
  const double sum = theta_sum_1d(eps0, lambda, radius);
  const double integral = std::sqrt(M_PI * lambda);
  return {std::abs(sum - integral), std::sqrt(M_PI / (2.0 * lambda))};
}

} // namespace gw
