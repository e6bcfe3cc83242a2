#pragma once

#include <vector>

#include "gausswave/coeff_field.hpp"

namespace gw {

// Sign convention for the Hamiltonian flow. Paper keeps the printed
// dx/dt = -q_xi for the tau = q branch; Standard flips both signs.
enum class RaySign { Paper, Standard };

// The two null-bicharacteristic branches: Plus is the tau = q flow (the
// evolution operator U), Minus is the tau = -q flow (V).
enum class RayBranch { Plus, Minus };

struct PhasePoint {
  double t = 0.0;
  Vec x;
  Vec xi;
  double tau = 0.0;
};

struct RayPath {
  RayBranch branch = RayBranch::Plus;
  double t0 = 0.0, t1 = 0.0;
  std::vector<PhasePoint> samples;  // time ordered, first = start, last = end
  double richardson_error = 0.0;

  const PhasePoint& endpoint() const { return samples.back(); }
};

struct RayRhs {
  Vec dx_dt;
  Vec dxi_dt;
};

// Branch Plus with the paper convention: dx/dt = -q_xi, dxi/dt = q_x.
// Branch Minus flips both; RaySign::Standard flips both again.
RayRhs ray_rhs(const CoefficientField& field, const PhasePoint& pt,
               RayBranch branch, RaySign sign = RaySign::Paper);

// Fixed-step RK4 with h = min(tol^{1/4}, |t1-t0|/64), validated by step
// halving until the Richardson endpoint estimate is below tol.
RayPath evolve(const CoefficientField& field, const PhasePoint& start, double t0,
               double t1, RayBranch branch, double tol = 1e-10,
               RaySign sign = RaySign::Paper);

struct FlowConstant {
  double C_Ta;       // envelope constant C(T,a) >= 1
  double k0;         // max{2 log2 C(T,a), 1}
  double lipschitz;  // measured sup |q_x| / |xi|
};

// Gronwall envelope constant for initial band 1/a < |xi| < a over |t| <= T,
// from the measured Lipschitz rate of the flow.
FlowConstant flow_constant(const CoefficientField& field, double T, double a,
                           double box_radius = 2.0);

// Measured min/max ratio of the Lemma-6 squared flow distances over a
// sample of close lattice pairs.
struct DistanceEquivalence {
  double D1;
  double D2;
};
DistanceEquivalence distance_equivalence_check(
    const CoefficientField& field,
    const std::vector<std::pair<PhasePoint, PhasePoint>>& pairs, double t,
    double tol = 1e-10, RaySign sign = RaySign::Paper);

} // namespace gw
