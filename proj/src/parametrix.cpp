#include "gausswave/parametrix.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

namespace gw {

namespace {

// 8-point Gauss-Legendre rule on [-1, 1].
constexpr int kGLN = 8;
constexpr double kGLNode[kGLN] = {
    -0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
    -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
    0.7966664774136267,  0.9602898564975363};
constexpr double kGLWeight[kGLN] = {
    0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
    0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
    0.2223810344533745, 0.1012285362903763};

Complex half_sum(Complex a, Complex b) { return 0.5 * (a + b); }
Complex half_diff_over_iq(Complex a, Complex b, double q0) {
  return 0.5 * (a - b) / (kI * q0);
}

} // namespace

TwoBranchAtoms propagate_two_branch(const CoefficientField& field,
                                    const Frame& frame, double t_prime, double t,
                                    double tol, RaySign sign) {
  TwoBranchAtoms out;
  out.t = t;
  out.t_prime = t_prime;
  out.q0 = Vec::Zero(frame.size());
  out.plus.reserve(frame.size());
  out.minus.reserve(frame.size());
  for (int j = 0; j < frame.size(); ++j) {
    const FrameAtom& atom = frame.atoms[j];
    const double q0 = symbol_q(field, t_prime, atom.x, atom.xi);
    if (q0 < 1e-12)
      throw DivisionDegeneracy("atom symbol value q0 vanished; corrupt frame data");
    out.q0(j) = q0;
    PhasePoint start;
    start.t = t_prime;
    start.x = atom.x;
    start.xi = atom.xi;
    const RayPath rp = evolve(field, start, t_prime, t, RayBranch::Plus, tol, sign);
    const RayPath rm = evolve(field, start, t_prime, t, RayBranch::Minus, tol, sign);
    out.plus.push_back(PropagatedAtom{atom, rp.endpoint().x, rp.endpoint().xi});
    out.minus.push_back(PropagatedAtom{atom, rm.endpoint().x, rm.endpoint().xi});
  }
  return out;
}

Complex bC_entry(const FrameAtom& row, const TwoBranchAtoms& cols, int j) {
  return half_sum(b_E_entry(row, cols.plus[j]), b_E_entry(row, cols.minus[j]));
}

Complex bS_entry(const FrameAtom& row, const TwoBranchAtoms& cols, int j) {
  return half_diff_over_iq(b_E_entry(row, cols.plus[j]),
                           b_E_entry(row, cols.minus[j]), cols.q0(j));
}

Complex bTC_entry(const FrameAtom& row, const TwoBranchAtoms& cols, int j) {
  return half_sum(b_T_entry(row, cols.plus[j]), b_T_entry(row, cols.minus[j]));
}

Complex bTS_entry(const FrameAtom& row, const TwoBranchAtoms& cols, int j) {
  return half_diff_over_iq(b_T_entry(row, cols.plus[j]),
                           b_T_entry(row, cols.minus[j]), cols.q0(j));
}

SparseOperator assemble_evolution(EvolutionKind kind, const Frame& frame,
                                  const TwoBranchAtoms& cols, double threshold,
                                  std::int64_t max_entries, int threads) {
  if (static_cast<int>(cols.plus.size()) != frame.size())
    throw IndexMismatch("two-branch atoms do not match the frame enumeration");
  const int N = frame.size();
  const bool t_kernel = (kind == EvolutionKind::TC || kind == EvolutionKind::TS);
  const bool sine = (kind == EvolutionKind::S || kind == EvolutionKind::TS);

  SparseOperator op;
  op.t = cols.t;
  op.kind = t_kernel ? OperatorKind::T : OperatorKind::E;
  op.threshold = threshold;
  op.order_weight = (kind == EvolutionKind::TC) ? 1 : 0;
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
      const double denom = sine ? 2.0 * cols.q0(j) : 2.0;
      for (int i = 0; i < N; ++i) {
        const FrameAtom& row = frame.atoms[i];
        const double bound =
            (t_kernel ? entry_bound_T(row, cols.plus[j]) +
                            entry_bound_T(row, cols.minus[j])
                      : entry_bound_E(row, cols.plus[j]) +
                            entry_bound_E(row, cols.minus[j])) /
            denom;
        if (bound <= threshold) {
          blk.row_pruned(i) += bound;
          blk.col_pruned(j) += bound;
          continue;
        }
        Complex v;
        switch (kind) {
          case EvolutionKind::C: v = bC_entry(row, cols, j); break;
          case EvolutionKind::S: v = bS_entry(row, cols, j); break;
          case EvolutionKind::TC: v = bTC_entry(row, cols, j); break;
          case EvolutionKind::TS: v = bTS_entry(row, cols, j); break;
        }
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
    throw SizeOverflow("evolution operator exceeds the configured entry cap");

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

namespace {

// Linear interpolation of grid-sampled coefficient vectors.
CVec interp_coeffs(const std::vector<double>& grid, const std::vector<CVec>& vals,
                   double s) {
  if (s <= grid.front()) return vals.front();
  if (s >= grid.back()) return vals.back();
  const auto it = std::upper_bound(grid.begin(), grid.end(), s);
  const int hi = static_cast<int>(it - grid.begin());
  const int lo = hi - 1;
  const double w = (s - grid[lo]) / (grid[hi] - grid[lo]);
  return (1.0 - w) * vals[lo] + w * vals[hi];
}

CVec analyze_mixture(const GaussianMixture& f, const Frame& frame) {
  return analyze(f, frame, 0.0).values;
}

// Nodes of the m-point Gauss-Legendre rule on [-1, 1], by Newton iteration on
// the Legendre three-term recurrence.
std::vector<double> legendre_nodes(int m) {
  std::vector<double> nodes(m);
  for (int i = 0; i < m; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (m + 0.5));
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= m; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      const double dp = m * (x * p1 - p0) / (x * x - 1.0);
      const double step = p1 / dp;
      x -= step;
      if (std::abs(step) < 1e-15) break;
    }
    nodes[i] = x;
  }
  std::sort(nodes.begin(), nodes.end());
  return nodes;
}

// The frame is redundant, so its Gram matrix is rank deficient; expansions
// are recovered with a spectral pseudo-inverse that drops eigenvalues below
// this fraction of the largest one.
constexpr double kGramCutoff = 1e-8;

} // namespace

Solution volterra_solve(const CauchyProblem& problem, const Frame& frame,
                        const SolverOptions& opts) {
  if (opts.t_final <= 0.0 || opts.t_final > problem.horizon ||
      opts.t_final > problem.field.time_horizon_T)
    throw InvalidConfig("solve time must lie in (0, horizon]");
  if (opts.nodes_per_unit < 2 || opts.max_terms < 1)
    throw InvalidConfig("solver needs at least 2 quadrature nodes and 1 term");
  const int N = frame.size();

  Solution sol;
  sol.grid.push_back(0.0);
  const int panels = std::max(1, static_cast<int>(std::ceil(opts.t_final)));
  const std::vector<double> panel_nodes = legendre_nodes(opts.nodes_per_unit);
  for (int p = 0; p < panels; ++p) {
    const double a = opts.t_final * p / panels;
    const double b = opts.t_final * (p + 1) / panels;
    for (int q = 0; q < opts.nodes_per_unit; ++q)
      sol.grid.push_back(0.5 * (a + b) + 0.5 * (b - a) * panel_nodes[q]);
  }
  const int M = static_cast<int>(sol.grid.size());
  if (!problem.forcing.empty() &&
      static_cast<int>(problem.forcing.size()) != M)
    throw IndexMismatch("forcing samples must match the solver time grid");

  // Gram factorization: everything is expanded in the frame by least squares.
  const std::vector<PropagatedAtom> frozen =
      propagate_atoms(problem.field, frame, 0.0, 0.0, RayBranch::Plus,
                      opts.ray_tol, opts.sign);
  CMat gram(N, N);
  for (int j = 0; j < N; ++j)
    for (int i = 0; i < N; ++i) gram(i, j) = b_E_entry(frame.atoms[i], frozen[j]);
  const Eigen::SelfAdjointEigenSolver<CMat> gram_eig(gram);
  if (gram_eig.info() != Eigen::Success)
    throw NonContraction("Gram eigendecomposition failed");
  const double lambda_max = gram_eig.eigenvalues().maxCoeff();
  Vec inv_eig = Vec::Zero(N);
  for (int i = 0; i < N; ++i)
    if (gram_eig.eigenvalues()(i) > kGramCutoff * lambda_max)
      inv_eig(i) = 1.0 / gram_eig.eigenvalues()(i);
  const auto gram_solve = [&](const CVec& b) -> CVec {
    return gram_eig.eigenvectors() *
           (inv_eig.asDiagonal() * (gram_eig.eigenvectors().adjoint() * b));
  };

  sol.a_f = gram_solve(analyze_mixture(problem.f, frame));
  sol.a_h = gram_solve(analyze_mixture(problem.h, frame));
  const bool has_f = sol.a_f.norm() > 0.0;
  const bool has_h = sol.a_h.norm() > 0.0;

  // Right-hand side F - T(C(t,0) f + S(t,0) h) at every grid time.
  std::vector<CVec> term(M, CVec::Zero(N));
  for (int q = 0; q < M; ++q) {
    CVec rhs = CVec::Zero(N);
    if (!problem.forcing.empty())
      rhs = analyze_mixture(problem.forcing[q], frame);
    if (has_f || has_h) {
      const TwoBranchAtoms branches = propagate_two_branch(
          problem.field, frame, 0.0, sol.grid[q], opts.ray_tol, opts.sign);
      if (has_f)
        rhs -= apply_operator(assemble_evolution(EvolutionKind::TC, frame, branches,
                                                 opts.threshold, 50'000'000,
                                                 opts.threads),
                              sol.a_f);
      if (has_h)
        rhs -= apply_operator(assemble_evolution(EvolutionKind::TS, frame, branches,
                                                 opts.threshold, 50'000'000,
                                                 opts.threads),
                              sol.a_h);
    }
    term[q] = gram_solve(rhs);
  }

  const auto grid_norm = [&](const std::vector<CVec>& v) {
    double s = 0.0;
    for (const CVec& c : v) s = std::max(s, c.norm());
    return s;
  };
  sol.report.rhs_norm = grid_norm(term);
  sol.a_G = term;

  if (sol.report.rhs_norm == 0.0) return sol;  // zero data: G and u vanish

  // Cache the Volterra kernel at (grid time, inner quadrature point).
  struct InnerPoint {
    double s;
    double w;
    SparseOperator kernel;
  };
  std::vector<std::vector<InnerPoint>> inner(M);
  for (int q = 1; q < M; ++q) {
    const double t = sol.grid[q];
    inner[q].reserve(kGLN);
    for (int p = 0; p < kGLN; ++p) {
      InnerPoint ip;
      ip.s = 0.5 * t * (1.0 + kGLNode[p]);
      ip.w = 0.5 * t * kGLWeight[p];
      const TwoBranchAtoms branches = propagate_two_branch(
          problem.field, frame, ip.s, t, opts.ray_tol, opts.sign);
      ip.kernel = assemble_evolution(EvolutionKind::TS, frame, branches,
                                     opts.threshold, 50'000'000, opts.threads);
      inner[q].push_back(std::move(ip));
    }
  }

  sol.report.term_norms.push_back(sol.report.rhs_norm);
  const double target = opts.volterra_tol * sol.report.rhs_norm;
  for (int n = 1; n <= opts.max_terms; ++n) {
    std::vector<CVec> next(M, CVec::Zero(N));
    for (int q = 1; q < M; ++q) {
      CVec acc = CVec::Zero(N);
      for (const InnerPoint& ip : inner[q])
        acc -= ip.w * apply_operator(ip.kernel, interp_coeffs(sol.grid, term, ip.s));
      next[q] = gram_solve(acc);
    }
    term = std::move(next);
    const double norm = grid_norm(term);
    sol.report.term_norms.push_back(norm);
    for (int q = 0; q < M; ++q) sol.a_G[q] += term[q];
    sol.report.terms_used = n + 1;
    if (norm < target) return sol;
  }
  throw NonContraction("Volterra series failed to reach tolerance within max_terms");
}

namespace {

void append_branch_packets(GaussianMixture& mix, const Frame& frame,
                           const TwoBranchAtoms& branches, const CVec& a,
                           Complex plus_scale, Complex minus_scale,
                           bool sine_normalized, double drop_below) {
  for (int j = 0; j < frame.size(); ++j) {
    if (std::abs(a(j)) <= drop_below) continue;
    const Complex base = sine_normalized ? a(j) / (kI * branches.q0(j)) : a(j);
    GaussianPacket p = branches.plus[j].packet();
    p.amplitude *= plus_scale * base;
    mix.terms.push_back(std::move(p));
    GaussianPacket m = branches.minus[j].packet();
    m.amplitude *= minus_scale * base;
    mix.terms.push_back(std::move(m));
  }
}

} // namespace

GaussianMixture synthesize_solution(const CauchyProblem& problem,
                                    const Frame& frame, const SolverOptions& opts,
                                    const Solution& sol, double t) {
  GaussianMixture u;
  double amax = std::max(sol.a_f.lpNorm<Eigen::Infinity>(),
                         sol.a_h.lpNorm<Eigen::Infinity>());
  for (const CVec& a : sol.a_G) amax = std::max(amax, a.lpNorm<Eigen::Infinity>());
  const double drop = 1e-13 * amax;

  const TwoBranchAtoms from0 = propagate_two_branch(problem.field, frame, 0.0, t,
                                                    opts.ray_tol, opts.sign);
  if (sol.a_f.norm() > 0.0)
    append_branch_packets(u, frame, from0, sol.a_f, Complex(0.5, 0.0),
                          Complex(0.5, 0.0), false, drop);
  if (sol.a_h.norm() > 0.0)
    append_branch_packets(u, frame, from0, sol.a_h, Complex(0.5, 0.0),
                          Complex(-0.5, 0.0), true, drop);

  double g_norm = 0.0;
  for (const CVec& a : sol.a_G) g_norm = std::max(g_norm, a.norm());
  if (t > 0.0 && g_norm > 0.0) {
    for (int p = 0; p < kGLN; ++p) {
      const double s = 0.5 * t * (1.0 + kGLNode[p]);
      const double w = 0.5 * t * kGLWeight[p];
      const CVec a = interp_coeffs(sol.grid, sol.a_G, s);
      const TwoBranchAtoms branches = propagate_two_branch(
          problem.field, frame, s, t, opts.ray_tol, opts.sign);
      append_branch_packets(u, frame, branches, a, Complex(0.5 * w, 0.0),
                            Complex(-0.5 * w, 0.0), true, drop);
    }
  }
  return u;
}

double residual_estimate(const CauchyProblem& problem, const Frame& frame,
                         const SolverOptions& opts, const Solution& sol, double t,
                         const std::vector<Vec>& sample_points, double dt) {
  const GaussianMixture um = synthesize_solution(problem, frame, opts, sol, t - dt);
  const GaussianMixture u0 = synthesize_solution(problem, frame, opts, sol, t);
  const GaussianMixture up = synthesize_solution(problem, frame, opts, sol, t + dt);

  // Forcing value at (t, x), linearly interpolated between grid samples.
  const auto forcing_at = [&](const Vec& x) -> Complex {
    if (problem.forcing.empty()) return Complex{0.0, 0.0};
    if (t <= sol.grid.front()) return problem.forcing.front().eval(x);
    if (t >= sol.grid.back()) return problem.forcing.back().eval(x);
    const auto it = std::upper_bound(sol.grid.begin(), sol.grid.end(), t);
    const int hi = static_cast<int>(it - sol.grid.begin());
    const int lo = hi - 1;
    const double w = (t - sol.grid[lo]) / (sol.grid[hi] - sol.grid[lo]);
    return (1.0 - w) * problem.forcing[lo].eval(x) +
           w * problem.forcing[hi].eval(x);
  };

  const int n = problem.field.dim;
  const double h = dt;
  double worst = 0.0;
  for (const Vec& x : sample_points) {
    const Complex dtt = (up.eval(x) - 2.0 * u0.eval(x) + um.eval(x)) / (dt * dt);
    const Mat A = problem.field.eval(t, x);
    Complex spatial{0.0, 0.0};
    const Complex center = u0.eval(x);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Complex dij;
        if (i == j) {
          Vec xp = x, xm = x;
          xp(i) += h;
          xm(i) -= h;
          dij = (u0.eval(xp) - 2.0 * center + u0.eval(xm)) / (h * h);
        } else {
          Vec xpp = x, xpm = x, xmp = x, xmm = x;
          xpp(i) += h; xpp(j) += h;
          xpm(i) += h; xpm(j) -= h;
          xmp(i) -= h; xmp(j) += h;
          xmm(i) -= h; xmm(j) -= h;
          dij = (u0.eval(xpp) - u0.eval(xpm) - u0.eval(xmp) + u0.eval(xmm)) /
                (4.0 * h * h);
        }
        spatial += A(i, j) * dij;
      }
    worst = std::max(worst, std::abs(dtt - spatial - forcing_at(x)));
  }
  return worst;
}

} // namespace gw
