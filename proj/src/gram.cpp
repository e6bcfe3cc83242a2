#include "gausswave/gram.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <thread>

namespace gw {

std::vector<PropagatedAtom> propagate_atoms(const CoefficientField& field,
                                            const Frame& frame, double t0, double t,
                                            RayBranch branch, double tol,
                                            RaySign sign) {
  std::vector<PropagatedAtom> out;
  out.reserve(frame.atoms.size());
  for (const FrameAtom& atom : frame.atoms) {
    PhasePoint start;
    start.t = t0;
    start.x = atom.x;
    start.xi = atom.xi;
    const RayPath path = evolve(field, start, t0, t, branch, tol, sign);
    out.push_back(PropagatedAtom{atom, path.endpoint().x, path.endpoint().xi});
  }
  return out;
}

namespace {

struct PairGeometry {
  double c;       // |xi| + |xi'(t)|
  Vec eta;        // xi'(t) - xi
  Vec b;          // |xi| (x - x'(t)) / c
  double phase;   // Phi
  double decay;   // -|eta|^2/4c - (|xi||xi'|/c) |x - x'|^2
};

PairGeometry pair_geometry(const FrameAtom& row, const PropagatedAtom& col) {
  const double r1 = row.xi.norm();
  const double r2 = col.xi_t.norm();
  PairGeometry g;
  g.c = r1 + r2;
  g.eta = col.xi_t - row.xi;
  g.b = r1 * (row.x - col.x_t) / g.c;
  const Vec xbar = (r1 * row.x + r2 * col.x_t) / g.c;
  g.phase = row.x.dot(row.xi) - col.x_t.dot(col.xi_t) + xbar.dot(g.eta);
  g.decay = -g.eta.squaredNorm() / (4.0 * g.c) -
            (r1 * r2 / g.c) * (row.x - col.x_t).squaredNorm();
  return g;
}

Complex second_moment_poly(const PairGeometry& g, int n) {
  return Complex(-g.eta.squaredNorm() / (4.0 * g.c * g.c) + g.b.squaredNorm() +
                     n / (2.0 * g.c),
                 g.b.dot(g.eta) / g.c);
}

} // namespace

double beta_factor(const FrameAtom& row, const PropagatedAtom& col) {
  const double r1 = row.xi.norm();
  const double r2 = col.xi_t.norm();
  const int n = row.xi.size();
  return std::pow(r1 * r2 * row.dx * col.source.dx / (4.0 * M_PI * (r1 + r2)),
                  0.5 * n);
}

Complex b_E_entry(const FrameAtom& row, const PropagatedAtom& col) {
  const PairGeometry g = pair_geometry(row, col);
  return beta_factor(row, col) * std::exp(g.decay) *
         std::exp(kI * g.phase);
}

Complex b_T_entry(const FrameAtom& row, const PropagatedAtom& col) {
  const PairGeometry g = pair_geometry(row, col);
  const int n = row.xi.size();
  return beta_factor(row, col) * col.xi_t.squaredNorm() * std::exp(g.decay) *
         std::exp(kI * g.phase) * second_moment_poly(g, n);
}

double entry_bound_E(const FrameAtom& row, const PropagatedAtom& col) {
  const PairGeometry g = pair_geometry(row, col);
  return beta_factor(row, col) * std::exp(g.decay);
}

double entry_bound_T(const FrameAtom& row, const PropagatedAtom& col) {
  const PairGeometry g = pair_geometry(row, col);
  const int n = row.xi.size();
  const double poly_bound = g.eta.squaredNorm() / (4.0 * g.c * g.c) +
                            g.b.norm() * g.eta.norm() / g.c + g.b.squaredNorm() +
                            n / (2.0 * g.c);
  return beta_factor(row, col) * col.xi_t.squaredNorm() * std::exp(g.decay) *
         poly_bound;
}

SparseOperator assemble(OperatorKind kind, const Frame& frame,
                        const std::vector<PropagatedAtom>& cols, double t,
                        double threshold, std::int64_t max_entries, int threads) {
  if (static_cast<int>(cols.size()) != frame.size())
    throw IndexMismatch("propagated atoms do not match the frame enumeration");
  const int N = frame.size();

  SparseOperator op;
  op.t = t;
  op.kind = kind;
  op.threshold = threshold;
  op.order_weight = (kind == OperatorKind::T) ? 1 : 0;
  op.row_pruned = Vec::Zero(N);
  op.col_pruned = Vec::Zero(N);

  struct ColBlock {
    std::vector<Eigen::Triplet<Complex>> triplets;
    Vec row_pruned;
    Vec col_pruned;
  };
  const int nthreads = std::max(1, threads);
  std::vector<ColBlock> blocks(nthreads);
  const auto worker = [&](int tid) {
    ColBlock& blk = blocks[tid];
    blk.row_pruned = Vec::Zero(N);
    blk.col_pruned = Vec::Zero(N);
    for (int j = tid; j < N; j += nthreads) {
      const PropagatedAtom& col = cols[j];
      for (int i = 0; i < N; ++i) {
        const FrameAtom& row = frame.atoms[i];
        const double bound = (kind == OperatorKind::E) ? entry_bound_E(row, col)
                                                       : entry_bound_T(row, col);
        if (bound <= threshold) {
          blk.row_pruned(i) += bound;
          blk.col_pruned(j) += bound;
          continue;
        }
        const Complex v = (kind == OperatorKind::E) ? b_E_entry(row, col)
                                                    : b_T_entry(row, col);
        blk.triplets.emplace_back(i, j, v);
      }
    }
  };
  if (nthreads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (int tid = 0; tid < nthreads; ++tid) pool.emplace_back(worker, tid);
    for (std::thread& th : pool) th.join();
  }

  std::int64_t total = 0;
  for (const ColBlock& blk : blocks) total += static_cast<std::int64_t>(blk.triplets.size());
  if (total > max_entries)
    throw SizeOverflow("sparse operator exceeds the configured entry cap");

  std::vector<Eigen::Triplet<Complex>> triplets;
  triplets.reserve(total);
  for (ColBlock& blk : blocks) {
    triplets.insert(triplets.end(), blk.triplets.begin(), blk.triplets.end());
    op.row_pruned += blk.row_pruned;
    op.col_pruned += blk.col_pruned;
  }
  op.matrix.resize(N, N);
  op.matrix.setFromTriplets(triplets.begin(), triplets.end());

  op.row_sums = op.row_pruned;
  op.col_sums = op.col_pruned;
  for (int j = 0; j < op.matrix.outerSize(); ++j)
    for (Eigen::SparseMatrix<Complex>::InnerIterator it(op.matrix, j); it; ++it) {
      const double a = std::abs(it.value());
      op.row_sums(it.row()) += a;
      op.col_sums(j) += a;
    }
  return op;
}

CVec apply_operator(const SparseOperator& op, const CVec& c) {
  if (c.size() != op.matrix.cols())
    throw IndexMismatch("coefficient length does not match the operator");
  return op.matrix * c;
}

std::vector<double> schur_row_sums_by_level(const SparseOperator& op,
                                            const Frame& frame) {
  int k_top = 0;
  for (const FrameAtom& a : frame.atoms) k_top = std::max(k_top, a.index.k);
  std::vector<double> out(k_top + 1, 0.0);
  for (int i = 0; i < frame.size(); ++i) {
    const int k = frame.atoms[i].index.k;
    const double scaled =
        op.row_sums(i) * std::pow(2.0, -op.order_weight * double(k));
    out[k] = std::max(out[k], scaled);
  }
  return out;
}

namespace {

// Beam field phi_gamma(t, x) transported from time 0.
Complex beam_eval(const PropagatedAtom& beam, const Vec& x) {
  const Vec d = x - beam.x_t;
  return beam.packet().amplitude *
         std::exp(kI * beam.xi_t.dot(d) - beam.xi_t.norm() * d.squaredNorm());
}

} // namespace

double beam_residual(const CoefficientField& field, const FrameAtom& atom,
                     double t, const std::vector<Vec>& sample_points,
                     double ray_tol, RaySign sign) {
  const int n = field.dim;
  const double h = std::min(1e-3, std::pow(2.0, -0.5 * atom.index.k) / 8.0);

  // Transport the atom to t - h, t, t + h once; all sample points reuse them.
  std::array<PropagatedAtom, 3> beams;
  for (int s = 0; s < 3; ++s) {
    const double ts = t + (s - 1) * h;
    PhasePoint start;
    start.t = 0.0;
    start.x = atom.x;
    start.xi = atom.xi;
    const RayPath path = evolve(field, start, 0.0, ts, RayBranch::Plus, ray_tol, sign);
    beams[s] = PropagatedAtom{atom, path.endpoint().x, path.endpoint().xi};
  }

  const double scale = atom.norm_const * beams[1].xi_t.norm();
  double worst = 0.0;
  for (const Vec& x : sample_points) {
    const Complex dtt = (beam_eval(beams[2], x) - 2.0 * beam_eval(beams[1], x) +
                         beam_eval(beams[0], x)) /
                        (h * h);
    const Mat A = field.eval(t, x);
    Complex lap{0.0, 0.0};
    const Complex center = beam_eval(beams[1], x);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        Complex dij;
        if (i == j) {
          Vec xp = x, xm = x;
          xp(i) += h;
          xm(i) -= h;
          dij = (beam_eval(beams[1], xp) - 2.0 * center + beam_eval(beams[1], xm)) /
                (h * h);
        } else {
          Vec xpp = x, xpm = x, xmp = x, xmm = x;
          xpp(i) += h; xpp(j) += h;
          xpm(i) += h; xpm(j) -= h;
          xmp(i) -= h; xmp(j) += h;
          xmm(i) -= h; xmm(j) -= h;
          dij = (beam_eval(beams[1], xpp) - beam_eval(beams[1], xpm) -
                 beam_eval(beams[1], xmp) + beam_eval(beams[1], xmm)) /
                (4.0 * h * h);
        }
        lap += A(i, j) * dij;
      }
    }
    worst = std::max(worst, std::abs(dtt - lap) / scale);
  }
  return worst;
}

} // namespace gw
