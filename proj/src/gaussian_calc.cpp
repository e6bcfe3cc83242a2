#include "gausswave/gaussian_calc.hpp"

#include <cmath>

namespace gw {

void GaussianIntegralParams::validate() const {
  if (c <= 0.0) throw DomainError("gaussian integral requires decay c > 0");
}

double gauss_fourier(const GaussianIntegralParams& p) {
  p.validate();
  const double eta2 = p.eta.size() ? p.eta.squaredNorm() : 0.0;
  return std::pow(M_PI / p.c, 0.5 * p.n) * std::exp(-eta2 / (4.0 * p.c));
}

CVec gauss_first_moment(const GaussianIntegralParams& p) {
  p.validate();
  const double base = gauss_fourier(p);
  CVec out(p.n);
  for (int j = 0; j < p.n; ++j) {
    const double etaj = p.eta.size() ? p.eta(j) : 0.0;
    const double bj = p.b.size() ? p.b(j) : 0.0;
    out(j) = base * (kI * etaj / (2.0 * p.c) + bj);
  }
  return out;
}

Complex gauss_second_moment(const GaussianIntegralParams& p) {
  p.validate();
  const double base = gauss_fourier(p);
  const double eta2 = p.eta.size() ? p.eta.squaredNorm() : 0.0;
  const double b2 = p.b.size() ? p.b.squaredNorm() : 0.0;
  const double beta = (p.b.size() && p.eta.size()) ? p.b.dot(p.eta) : 0.0;
  return base * (-eta2 / (4.0 * p.c * p.c) + kI * beta / p.c + b2 +
                 p.n / (2.0 * p.c));
}

GaussianProduct gauss_pair_product(const GaussianPacket& g1, const GaussianPacket& g2) {
  if (g1.width <= 0.0 || g2.width <= 0.0)
    throw DomainError("gauss_pair_product requires positive widths");
  GaussianProduct out;
  const double c = g1.width + g2.width;
  out.decay = c;
  out.center = (g1.width * g1.center + g2.width * g2.center) / c;
  out.osc = g2.frequency - g1.frequency;
  // Cross term from completing the square in the shared quadratic.
  const double cross =
      (g1.width * g2.width / c) * (g1.center - g2.center).squaredNorm();
  out.const_phase = out.osc.dot(out.center) + g1.frequency.dot(g1.center) -
                    g2.frequency.dot(g2.center);
  out.prefactor = std::conj(g1.amplitude) * g2.amplitude * std::exp(-cross);
  return out;
}

Complex packet_inner_product(const GaussianPacket& g1, const GaussianPacket& g2) {
  const GaussianProduct prod = gauss_pair_product(g1, g2);
  GaussianIntegralParams p;
  p.c = prod.decay;
  p.eta = prod.osc;
  p.n = static_cast<int>(g1.center.size());
  return prod.prefactor * std::exp(kI * prod.const_phase) * gauss_fourier(p);
}

} // namespace gw
