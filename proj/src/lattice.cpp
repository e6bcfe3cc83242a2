#include "gausswave/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gw {

namespace {

// Lexicographic comparison used for deterministic tie-breaking.
bool lex_less(const Vec& a, const Vec& b) {
  for (int j = 0; j < a.size(); ++j) {
    if (a(j) < b(j)) return true;
    if (a(j) > b(j)) return false;
  }
  return false;
}

// Candidate grid over the annulus [2^{k-1}, 2^k), spacing 2^{k/2}/8 both
// radially and along each ring.
std::vector<Vec> annulus_candidates(int n, int k) {
  const double r_lo = std::ldexp(1.0, k - 1);
  const double r_hi = std::ldexp(1.0, k);
  const double sep = std::pow(2.0, 0.5 * k);
  const double step = sep / 8.0;
  std::vector<Vec> out;
  for (double r = r_lo + 0.5 * step; r < r_hi; r += step) {
    if (n == 1) {
      Vec p(1), m(1);
      p << r;
      m << -r;
      out.push_back(p);
      out.push_back(m);
    } else {
      const int count = std::max(4, static_cast<int>(std::ceil(2.0 * M_PI * r / step)));
      for (int j = 0; j < count; ++j) {
        const double ang = 2.0 * M_PI * j / count;
        Vec p(2);
        p << r * std::cos(ang), r * std::sin(ang);
        out.push_back(p);
      }
    }
  }
  return out;
}

// Greedy farthest-point packing with separation > 2^{k/2}, seeded at angle
// zero on the mid-annulus sphere of radius 3 * 2^{k-2}.
std::vector<Vec> pack_level(int n, int k) {
  const double sep = std::pow(2.0, 0.5 * k);
  std::vector<Vec> candidates = annulus_candidates(n, k);
  std::sort(candidates.begin(), candidates.end(), lex_less);

  Vec seed = Vec::Zero(n);
  seed(0) = 3.0 * std::ldexp(1.0, k - 2);
  std::vector<Vec> accepted{seed};

  std::vector<double> min_dist(candidates.size());
  for (size_t c = 0; c < candidates.size(); ++c)
    min_dist[c] = (candidates[c] - seed).norm();

  while (true) {
    int best = -1;
    double best_dist = sep;
    for (size_t c = 0; c < candidates.size(); ++c) {
      if (min_dist[c] > best_dist ||
          (best >= 0 && min_dist[c] == best_dist &&
           lex_less(candidates[c], candidates[best]))) {
        best = static_cast<int>(c);
        best_dist = min_dist[c];
      }
    }
    if (best < 0) break;
    const Vec& pt = candidates[best];
    accepted.push_back(pt);
    for (size_t c = 0; c < candidates.size(); ++c)
      min_dist[c] = std::min(min_dist[c], (candidates[c] - pt).norm());
  }
  return accepted;
}

} // namespace

void LatticeConfig::validate() const {
  if (C_eps >= 4.0 || C_eps <= 0.0)
    throw InvalidConfig("lattice step constant C_eps must lie in (0, 4)");
  if (epsilon <= 0.0) throw InvalidConfig("lattice exponent epsilon must be > 0");
  if (R < 0.0) throw InvalidConfig("spatial cutoff R must be >= 0");
  if (k_max < 0) throw InvalidConfig("k_max must be >= 0");
}

FrequencyLattice build_frequency_lattice(int n, int k_max) {
  if (n < 1 || k_max < 1)
    throw InvalidConfig("frequency lattice needs n >= 1 and k_max >= 1");
  FrequencyLattice lattice;
  lattice.dim = n;
  lattice.k_max = k_max;
  lattice.directions.resize(k_max + 1);
  for (int k = 0; k <= k_max; ++k) {
    const double inv = std::ldexp(1.0, -k);
    for (const Vec& xi : pack_level(n, k))
      lattice.directions[k].push_back(inv * xi);
  }
  return lattice;
}

double spatial_step(const LatticeConfig& cfg, int k) {
  cfg.validate();
  if (k < 0) throw InvalidConfig("spatial step needs k >= 0");
  return cfg.C_eps * std::pow(2.0, -0.5 * k - cfg.epsilon * k);
}

std::vector<FrameIndex> enumerate_gamma(const FrequencyLattice& lattice,
                                        const LatticeConfig& cfg) {
  cfg.validate();
  std::vector<FrameIndex> out;
  const int n = lattice.dim;
  const int k_top = std::min(cfg.k_max, lattice.k_max);
  for (int k = 0; k <= k_top; ++k) {
    const double dx = spatial_step(cfg, k);
    // |dx * alpha| < R
    const int a_max = static_cast<int>(std::ceil(cfg.R / dx));
    for (int i = 0; i < static_cast<int>(lattice.directions[k].size()); ++i) {
      if (n == 1) {
        for (int a = -a_max; a <= a_max; ++a) {
          if (std::abs(dx * a) >= cfg.R) continue;
          FrameIndex g;
          g.k = k;
          g.i = i;
          g.alpha = Eigen::VectorXi::Constant(1, a);
          out.push_back(std::move(g));
          if (static_cast<std::int64_t>(out.size()) > cfg.max_indices)
            throw SizeOverflow("frame index enumeration exceeds configured cap");
        }
      } else {
        for (int a0 = -a_max; a0 <= a_max; ++a0)
          for (int a1 = -a_max; a1 <= a_max; ++a1) {
            Eigen::VectorXi alpha(2);
            alpha << a0, a1;
            if (dx * std::hypot(double(a0), double(a1)) >= cfg.R) continue;
            FrameIndex g;
            g.k = k;
            g.i = i;
            g.alpha = alpha;
            out.push_back(std::move(g));
            if (static_cast<std::int64_t>(out.size()) > cfg.max_indices)
              throw SizeOverflow("frame index enumeration exceeds configured cap");
          }
      }
    }
  }
  return out;
}

double annulus_count_bound(int n, int k) {
  return std::pow(2.0, n) * std::pow(std::pow(2.0, 0.5 * k) + 1.0, n);
}

} // namespace gw
