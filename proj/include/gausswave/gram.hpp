#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include <Eigen/SparseCore>

#include "gausswave/atoms.hpp"
#include "gausswave/rays.hpp"

namespace gw {

// Frame atom transported along one bicharacteristic branch: center, frequency
// and width ride the flow and the normalization constant is re-evaluated at
// the transported frequency, (|xi_gamma(t)| dx / 2 pi)^{n/2}.
struct PropagatedAtom {
  FrameAtom source;
  Vec x_t;   // x_gamma(t)
  Vec xi_t;  // xi_gamma(t)

  GaussianPacket packet() const {
    const double n = static_cast<double>(x_t.size());
    const double amp =
        source.norm_const * std::pow(xi_t.norm() / source.xi.norm(), 0.5 * n);
    return GaussianPacket{Complex(amp, 0.0), x_t, xi_t, xi_t.norm()};
  }
};

// Transport every atom of the frame from t0 to t along one branch.
std::vector<PropagatedAtom> propagate_atoms(const CoefficientField& field,
                                            const Frame& frame, double t0, double t,
                                            RayBranch branch, double tol = 1e-10,
                                            RaySign sign = RaySign::Paper);

// beta_{gamma,gamma'} = (|xi| |xi'(t)| dx dx' / (4 pi (|xi| + |xi'(t)|)))^{n/2}
double beta_factor(const FrameAtom& row, const PropagatedAtom& col);

// b_E(gamma, gamma', t) = <phi_gamma, phi_gamma'(t)> in closed form.
Complex b_E_entry(const FrameAtom& row, const PropagatedAtom& col);

// b_T(gamma, gamma', t): leading-order kernel of T applied to the beam,
// beta |xi'(t)|^2 e^{i Phi} e^{-|eta|^2/4c} (second-moment polynomial).
Complex b_T_entry(const FrameAtom& row, const PropagatedAtom& col);

// Magnitude bound on the entry (unit phase dropped); used as the pruning
// predicate, and exact for the E kernel.
double entry_bound_E(const FrameAtom& row, const PropagatedAtom& col);
double entry_bound_T(const FrameAtom& row, const PropagatedAtom& col);

enum class OperatorKind { E, T };

struct SparseOperator {
  double t = 0.0;
  OperatorKind kind = OperatorKind::E;
  double threshold = 0.0;
  int order_weight = 0;  // 0 for E, 1 for T (the 2^k Schur scale)
  Eigen::SparseMatrix<Complex> matrix;  // rows gamma, cols gamma'
  Vec row_sums;  // sum_col |entry| + pruned-mass bound per row
  Vec col_sums;
  Vec row_pruned;  // bound on the discarded mass per row
  Vec col_pruned;
};

// Evaluate all pairs, keep entries whose magnitude bound exceeds the
// threshold, and accumulate the discarded bounds. Deterministic for any
// thread count.
SparseOperator assemble(OperatorKind kind, const Frame& frame,
                        const std::vector<PropagatedAtom>& cols, double t,
                        double threshold, std::int64_t max_entries = 50'000'000,
                        int threads = 1);

CVec apply_operator(const SparseOperator& op, const CVec& c);

// Max over rows of the k-weighted absolute row sum 2^{-k w} sum |entries|,
// grouped by the row level k.
std::vector<double> schur_row_sums_by_level(const SparseOperator& op,
                                            const Frame& frame);

// Normalized size of T phi_gamma along the beam: sup over sample points of
// |T phi_gamma(t, x)| / (norm_const |xi_gamma(t)|), with T applied by
// centered differences (h = min(1e-3, 2^{-k/2}/8)).
double beam_residual(const CoefficientField& field, const FrameAtom& atom,
                     double t, const std::vector<Vec>& sample_points,
                     double ray_tol = 1e-10, RaySign sign = RaySign::Paper);

} // namespace gw
