#pragma once

#include <vector>

#include "gausswave/gram.hpp"

namespace gw {

// Every frame atom transported from t' to t along both characteristic
// branches, plus the symbol value q0 = q(t', x_gamma, xi_gamma) that
// normalizes the sine-type operator.
struct TwoBranchAtoms {
  double t = 0.0;
  double t_prime = 0.0;
  std::vector<PropagatedAtom> plus;
  std::vector<PropagatedAtom> minus;
  Vec q0;
};

TwoBranchAtoms propagate_two_branch(const CoefficientField& field,
                                    const Frame& frame, double t_prime, double t,
                                    double tol = 1e-9,
                                    RaySign sign = RaySign::Paper);

// Entries of the cosine/sine evolution operators and of T composed with
// them, all in closed form per branch:
//   b_C  = (b_E^+ + b_E^-) / 2
//   b_S  = (b_E^+ - b_E^-) / (2 i q0)
//   b_TC = (b_T^+ + b_T^-) / 2
//   b_TS = (b_T^+ - b_T^-) / (2 i q0)
Complex bC_entry(const FrameAtom& row, const TwoBranchAtoms& cols, int j);
Complex bS_entry(const FrameAtom& row, const TwoBranchAtoms& cols, int j);
Complex bTC_entry(const FrameAtom& row, const TwoBranchAtoms& cols, int j);
Complex bTS_entry(const FrameAtom& row, const TwoBranchAtoms& cols, int j);

enum class EvolutionKind { C, S, TC, TS };

SparseOperator assemble_evolution(EvolutionKind kind, const Frame& frame,
                                  const TwoBranchAtoms& cols, double threshold,
                                  std::int64_t max_entries = 50'000'000,
                                  int threads = 1);

// Cauchy data for d_t^2 u - A(t,x,d_x) u = F, u(0) = f, d_t u(0) = h.
// forcing holds F sampled at the solver's stored time grid; empty means
// F identically zero.
struct CauchyProblem {
  GaussianMixture f;
  GaussianMixture h;
  std::vector<GaussianMixture> forcing;
  CoefficientField field;
  double horizon = 1.0;
};

struct SolverOptions {
  double t_final = 0.5;
  double ray_tol = 1e-9;
  double threshold = 1e-12;
  double volterra_tol = 1e-8;
  int max_terms = 30;
  int nodes_per_unit = 8;  // Gauss-Legendre nodes per unit time
  int threads = 1;
  RaySign sign = RaySign::Paper;
};

struct VolterraReport {
  std::vector<double> term_norms;  // frame-coefficient norm of each series term
  double rhs_norm = 0.0;
  int terms_used = 0;
};

// Solver state: the Volterra unknown G and the Cauchy data expanded in the
// frame (a = Gram^{-1} analysis coefficients), stored at the time grid.
struct Solution {
  std::vector<double> grid;  // 0, then the composite Gauss-Legendre nodes
  std::vector<CVec> a_G;     // frame expansion of G at each grid time
  CVec a_f;
  CVec a_h;
  VolterraReport report;
};

// Neumann-series solution of G(t) + int_0^t TS(t,s) G(s) ds = F - T(Cf + Sh),
// with the time integrals by Gauss-Legendre and G interpolated linearly
// between grid values. Throws NonContraction if the series fails to reach
// volterra_tol * ||RHS|| within max_terms terms.
Solution volterra_solve(const CauchyProblem& problem, const Frame& frame,
                        const SolverOptions& opts);

// u(t) = C(t,0) f + S(t,0) h + int_0^t S(t,s) G(s) ds as an explicit beam
// mixture (every term is a Gaussian packet riding the flow).
GaussianMixture synthesize_solution(const CauchyProblem& problem,
                                    const Frame& frame, const SolverOptions& opts,
                                    const Solution& sol, double t);

// Finite-difference estimate of max_x |T u(t,x) - F(t,x)| over the sample
// points, built from three synthesized snapshots at t - dt, t, t + dt.
double residual_estimate(const CauchyProblem& problem, const Frame& frame,
                         const SolverOptions& opts, const Solution& sol, double t,
                         const std::vector<Vec>& sample_points, double dt = 1e-3);

} // namespace gw
