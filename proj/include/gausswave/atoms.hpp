#pragma once

#include <vector>

#include "gausswave/gaussian_calc.hpp"
#include "gausswave/lattice.hpp"

namespace gw {

// One frame atom phi_gamma: a Gaussian envelope of width |xi_gamma|^{-1/2}
// modulated at xi_gamma and centered at x_gamma = Delta x_gamma * alpha.
struct FrameAtom {
  FrameIndex index;
  Vec x;             // x_gamma
  Vec xi;            // xi_gamma = 2^k omega_{i,k}
  double dx = 1.0;   // Delta x_gamma
  double norm_const = 1.0;  // (|xi| dx / 2 pi)^{n/2}

  GaussianPacket packet() const {
    return GaussianPacket{Complex(norm_const, 0.0), x, xi, xi.norm()};
  }
};

// Enumerated frame: lattice, config and the atom per FrameIndex, in the
// deterministic enumerate_gamma order.
struct Frame {
  FrequencyLattice lattice;
  LatticeConfig cfg;
  std::vector<FrameAtom> atoms;

  int dim() const { return lattice.dim; }
  int size() const { return static_cast<int>(atoms.size()); }
};

Frame build_frame(const FrequencyLattice& lattice, const LatticeConfig& cfg);
FrameAtom make_atom(const FrequencyLattice& lattice, const LatticeConfig& cfg,
                    const FrameIndex& index);

Complex atom_eval(const FrameAtom& atom, const Vec& x);

// Finite Gaussian mixture sum a_j exp(i eta_j.(x-y_j) - w_j |x-y_j|^2);
// the closed-form test-function class.
struct GaussianMixture {
  std::vector<GaussianPacket> terms;

  Complex eval(const Vec& x) const;
  Complex fourier(const Vec& xi) const;  // hat f with e^{-i xi . x} convention
};

// Closed-form L2 inner product <f, g> = int f conj(g).
Complex mixture_inner_product(const GaussianMixture& f, const GaussianMixture& g);

// Homogeneous Sobolev norm ||f||^2_{H^m} = (2 pi)^{-n} int |xi|^{2m} |hat f|^2.
double mixture_sobolev_norm_sq(const GaussianMixture& f, double m, int n);

// Coefficients aligned with the frame's enumeration order. Values are the
// raw c(gamma); the 2^{km} Sobolev weight is applied by the norm helpers.
struct CoeffSequence {
  CVec values;
  double sobolev_m = 0.0;
};

CoeffSequence analyze(const GaussianMixture& f, const Frame& frame, double m = 0.0);
GaussianMixture synthesize(const CoeffSequence& c, const Frame& frame);

// sum_gamma |2^{km} c(gamma)|^2
double weighted_energy(const CoeffSequence& c, const Frame& frame);

struct PartitionSum {
  double value;       // truncated sum over k <= k_max
  double tail_bound;  // bound on the dropped k > k_max mass
};

// Lemma-1 partition sum S(xi, m) = sum 2^{2km} exp(-|xi-xi_gamma|^2 / 2|xi_gamma|).
// Throws OutOfBand when |xi| is within a factor 2 of the 2^{k_max} boundary.
PartitionSum partition_sum(const FrequencyLattice& lattice, const Vec& xi, double m);

// Theorem-1 ratio sum |2^{km} c|^2 / ||f||^2_{H^m}; f must be in band.
double frame_ratio(const GaussianMixture& f, const Frame& frame, double m);

// Lemma-2 comparison: |discrete coefficient energy - continuous transform
// energy| for m = 0; the bound to check against is (pi^n e^{-1}/2) ||f||^2.
double lemma2_deviation(const GaussianMixture& f, const Frame& frame);

// Band limits implied by the lattice truncation: [1/2, 2^{k_max - 1}].
bool in_band(const FrequencyLattice& lattice, double freq_norm);

} // namespace gw
