#include "gausswave/atoms.hpp"

#include <cmath>

#include "gausswave/quadrature.hpp"

namespace gw {

FrameAtom make_atom(const FrequencyLattice& lattice, const LatticeConfig& cfg,
                    const FrameIndex& index) {
  FrameAtom atom;
  atom.index = index;
  atom.dx = spatial_step(cfg, index.k);
  atom.xi = lattice.frequency(index.k, index.i);
  atom.x = atom.dx * index.alpha.cast<double>();
  atom.norm_const =
      std::pow(atom.xi.norm() * atom.dx / (2.0 * M_PI), 0.5 * lattice.dim);
  return atom;
}

Frame build_frame(const FrequencyLattice& lattice, const LatticeConfig& cfg) {
  Frame frame;
  frame.lattice = lattice;
  frame.cfg = cfg;
  for (const FrameIndex& g : enumerate_gamma(lattice, cfg))
    frame.atoms.push_back(make_atom(lattice, cfg, g));
  return frame;
}

Complex atom_eval(const FrameAtom& atom, const Vec& x) {
  const Vec d = x - atom.x;
  return atom.norm_const *
         std::exp(kI * atom.xi.dot(d) - atom.xi.norm() * d.squaredNorm());
}

Complex GaussianMixture::eval(const Vec& x) const {
  Complex s{0.0, 0.0};
  for (const GaussianPacket& t : terms) {
    const Vec d = x - t.center;
    s += t.amplitude * std::exp(kI * t.frequency.dot(d) - t.width * d.squaredNorm());
  }
  return s;
}

Complex GaussianMixture::fourier(const Vec& xi) const {
  Complex s{0.0, 0.0};
  const int n = xi.size();
  for (const GaussianPacket& t : terms) {
    s += t.amplitude * std::exp(-kI * xi.dot(t.center)) *
         std::pow(M_PI / t.width, 0.5 * n) *
         std::exp(-(xi - t.frequency).squaredNorm() / (4.0 * t.width));
  }
  return s;
}

Complex mixture_inner_product(const GaussianMixture& f, const GaussianMixture& g) {
  // <f, g> = int f conj(g) = conj(sum int conj(f_j) g_l)
  Complex s{0.0, 0.0};
  for (const GaussianPacket& a : f.terms)
    for (const GaussianPacket& b : g.terms) s += packet_inner_product(b, a);
  return s;
}

double mixture_sobolev_norm_sq(const GaussianMixture& f, double m, int n) {
  if (f.terms.empty()) return 0.0;
  if (m == 0.0) {
    return mixture_inner_product(f, f).real();
  }
  // No closed form for fractional |xi|^{2m} moments; integrate |hat f|^2
  // against the weight over a box that covers every term's frequency mass.
  double L = 0.0;
  for (const GaussianPacket& t : f.terms)
    L = std::max(L, t.frequency.lpNorm<Eigen::Infinity>() +
                        12.0 * std::sqrt(t.width));
  const double inv = std::pow(2.0 * M_PI, -n);
  if (n == 1) {
    const auto integrand = [&](double xi) {
      Vec v(1);
      v << xi;
      const Complex fh = f.fourier(v);
      return Complex(std::pow(std::abs(xi), 2.0 * m) * std::norm(fh), 0.0);
    };
    return inv * integrate_gk(integrand, -L, L, 1e-11).real();
  }
  const auto integrand2 = [&](double x, double y) {
    Vec v(2);
    v << x, y;
    const Complex fh = f.fourier(v);
    return Complex(std::pow(v.norm(), 2.0 * m) * std::norm(fh), 0.0);
  };
  return inv * integrate_gk_2d(integrand2, -L, L, -L, L, 1e-8).real();
}

CoeffSequence analyze(const GaussianMixture& f, const Frame& frame, double m) {
  CoeffSequence c;
  c.sobolev_m = m;
  c.values = CVec::Zero(frame.size());
  for (int g = 0; g < frame.size(); ++g) {
    const GaussianPacket atom = frame.atoms[g].packet();
    Complex v{0.0, 0.0};
    for (const GaussianPacket& t : f.terms) v += packet_inner_product(atom, t);
    c.values(g) = v;
  }
  return c;
}

GaussianMixture synthesize(const CoeffSequence& c, const Frame& frame) {
  if (c.values.size() != frame.size())
    throw IndexMismatch("coefficient sequence does not match frame enumeration");
  GaussianMixture out;
  for (int g = 0; g < frame.size(); ++g) {
    if (c.values(g) == Complex{0.0, 0.0}) continue;
    GaussianPacket t = frame.atoms[g].packet();
    const double weight = std::pow(2.0, frame.atoms[g].index.k * c.sobolev_m);
    t.amplitude *= weight * c.values(g);
    out.terms.push_back(std::move(t));
  }
  return out;
}

double weighted_energy(const CoeffSequence& c, const Frame& frame) {
  double s = 0.0;
  for (int g = 0; g < frame.size(); ++g) {
    const double w = std::pow(2.0, frame.atoms[g].index.k * c.sobolev_m);
    s += std::norm(w * c.values(g));
  }
  return s;
}

bool in_band(const FrequencyLattice& lattice, double freq_norm) {
  return freq_norm >= 0.5 && freq_norm <= std::ldexp(1.0, lattice.k_max - 1);
}

PartitionSum partition_sum(const FrequencyLattice& lattice, const Vec& xi, double m) {
  const double r = xi.norm();
  if (r == 0.0) throw OutOfBand("partition sum undefined at xi = 0");
  if (r > std::ldexp(1.0, lattice.k_max - 1))
    throw OutOfBand("|xi| within a factor 2 of the k_max truncation boundary");
  if (r < 0.25) throw OutOfBand("|xi| below the resolved band");

  PartitionSum out{0.0, 0.0};
  for (int k = 0; k <= lattice.k_max; ++k) {
    const double weight = std::pow(2.0, 2.0 * k * m);
    for (const Vec& omega : lattice.directions[k]) {
      const Vec xig = std::ldexp(1.0, k) * omega;
      out.value +=
          weight * std::exp(-(xi - xig).squaredNorm() / (2.0 * xig.norm()));
    }
  }
  // Dropped levels q > k_max: at most 2^n (2^{q/2}+1)^n points at distance
  // at least 2^{q-1} - |xi| from xi (the set-E geometry of the Lemma 1 proof).
  const int n = lattice.dim;
  for (int q = lattice.k_max + 1; q <= lattice.k_max + 60; ++q) {
    const double gap = std::ldexp(1.0, q - 1) - r;
    const double decay = std::exp(-gap * gap / (2.0 * std::ldexp(1.0, q)));
    const double count = annulus_count_bound(n, q);
    out.tail_bound += std::pow(2.0, 2.0 * q * m) * count * decay;
    if (std::pow(2.0, 2.0 * q * m) * count * decay < 1e-300) break;
  }
  return out;
}

double frame_ratio(const GaussianMixture& f, const Frame& frame, double m) {
  for (const GaussianPacket& t : f.terms) {
    const double r = t.frequency.norm();
    if (r < 1.0 || r > std::ldexp(1.0, frame.lattice.k_max - 1))
      throw OutOfBand("mixture frequency outside the resolved annuli");
  }
  const double denom = mixture_sobolev_norm_sq(f, m, frame.dim());
  if (denom <= 0.0) throw OutOfBand("mixture has no Sobolev mass");
  const CoeffSequence c = analyze(f, frame, m);
  return weighted_energy(c, frame) / denom;
}

double lemma2_deviation(const GaussianMixture& f, const Frame& frame) {
  const CoeffSequence c = analyze(f, frame, 0.0);
  const double discrete = weighted_energy(c, frame);

  // Continuous side: (2 pi)^{-n} int sum_{(i,k)} |hat psi_gamma(xi)|^2
  // |hat f(xi)|^2 d xi with |hat psi|^2 = 2^{-n} exp(-|xi-xi_g|^2 / 2|xi_g|).
  const int n = frame.dim();
  const FrequencyLattice& lattice = frame.lattice;
  double L = 2.0 * std::ldexp(1.0, lattice.k_max);
  const auto weight = [&](const Vec& xi) {
    double s = 0.0;
    for (int k = 0; k <= lattice.k_max; ++k)
      for (const Vec& omega : lattice.directions[k]) {
        const Vec xig = std::ldexp(1.0, k) * omega;
        s += std::exp(-(xi - xig).squaredNorm() / (2.0 * xig.norm()));
      }
    return std::pow(2.0, -n) * s;
  };
  double continuous = 0.0;
  if (n == 1) {
    const auto integrand = [&](double xi) {
      Vec v(1);
      v << xi;
      return Complex(weight(v) * std::norm(f.fourier(v)), 0.0);
    };
    continuous =
        std::pow(2.0 * M_PI, -1) * integrate_gk(integrand, -L, L, 1e-10).real();
  } else {
    const auto integrand2 = [&](double x, double y) {
      Vec v(2);
      v << x, y;
      return Complex(weight(v) * std::norm(f.fourier(v)), 0.0);
    };
    continuous = std::pow(2.0 * M_PI, -2) *
                 integrate_gk_2d(integrand2, -L, L, -L, L, 1e-7).real();
  }
  return std::abs(discrete - continuous);
}

} // namespace gw
