#pragma once

#include <cstdint>
#include <vector>

#include "gausswave/errors.hpp"
#include "gausswave/types.hpp"

namespace gw {

// Frequency directions omega_{i,k} per dyadic level k. The lattice point
// at level k and direction i is xi = 2^k omega_{i,k}, which lies in the
// annulus [2^{k-1}, 2^k).
struct FrequencyLattice {
  int dim = 1;
  int k_max = 1;
  std::vector<std::vector<Vec>> directions;  // [k][i] -> omega_{i,k}, 1/2 <= |omega| < 1

  int levels() const { return static_cast<int>(directions.size()); }
  Vec frequency(int k, int i) const { return std::ldexp(1.0, k) * directions[k][i]; }
};

struct FrameIndex {
  int k = 0;                 // dyadic level
  int i = 0;                 // direction index within I_k
  Eigen::VectorXi alpha;     // spatial translation in Z^n
};

struct LatticeConfig {
  double epsilon = 0.25;  // > 0
  double C_eps = 1.0;     // in (0, 4)
  double R = 1.0;         // spatial cutoff |x_gamma| < R
  int k_max = 4;
  std::int64_t max_indices = 50'000'000;  // enumeration cap

  void validate() const;
};

// Greedy farthest-point packing of each annulus with separation > 2^{k/2},
// deterministic for fixed inputs.
FrequencyLattice build_frequency_lattice(int n, int k_max);

// Delta x_gamma = C_eps * 2^{-k/2 - eps k}
double spatial_step(const LatticeConfig& cfg, int k);

// All gamma = (i,k,alpha) with k <= k_max, i in I_k, |Delta x_gamma alpha| < R,
// in lexicographic (k, i, alpha) order.
std::vector<FrameIndex> enumerate_gamma(const FrequencyLattice& lattice,
                                        const LatticeConfig& cfg);

// Ball-packing ceiling on |I_k| used by the construction tests.
double annulus_count_bound(int n, int k);

} // namespace gw
