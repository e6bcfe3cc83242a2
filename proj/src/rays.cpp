#include "gausswave/rays.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gw {

RayRhs ray_rhs(const CoefficientField& field, const PhasePoint& pt,
               RayBranch branch, RaySign sign) {
  const SymbolGradients g = symbol_gradients(field, pt.t, pt.x, pt.xi);
  double s = (branch == RayBranch::Plus) ? 1.0 : -1.0;
  if (sign == RaySign::Standard) s = -s;
  return RayRhs{-s * g.q_xi, s * g.q_x};
}

namespace {

struct State {
  Vec x;
  Vec xi;
};

State rk4_step(const CoefficientField& field, double t, const State& s, double h,
               RayBranch branch, RaySign sign) {
  const auto f = [&](double tt, const State& st) {
    PhasePoint pt;
    pt.t = tt;
    pt.x = st.x;
    pt.xi = st.xi;
    return ray_rhs(field, pt, branch, sign);
  };
  const RayRhs k1 = f(t, s);
  const RayRhs k2 = f(t + 0.5 * h, State{s.x + 0.5 * h * k1.dx_dt, s.xi + 0.5 * h * k1.dxi_dt});
  const RayRhs k3 = f(t + 0.5 * h, State{s.x + 0.5 * h * k2.dx_dt, s.xi + 0.5 * h * k2.dxi_dt});
  const RayRhs k4 = f(t + h, State{s.x + h * k3.dx_dt, s.xi + h * k3.dxi_dt});
  State out;
  out.x = s.x + (h / 6.0) * (k1.dx_dt + 2.0 * k2.dx_dt + 2.0 * k3.dx_dt + k4.dx_dt);
  out.xi = s.xi + (h / 6.0) * (k1.dxi_dt + 2.0 * k2.dxi_dt + 2.0 * k3.dxi_dt + k4.dxi_dt);
  return out;
}

// March from t0 to t1 with a fixed number of steps, recording samples.
std::vector<PhasePoint> march(const CoefficientField& field, const PhasePoint& start,
                              double t0, double t1, int steps, RayBranch branch,
                              RaySign sign, double xi_floor) {
  std::vector<PhasePoint> samples;
  samples.reserve(steps + 1);
  State s{start.x, start.xi};
  PhasePoint p = start;
  p.t = t0;
  p.tau = (branch == RayBranch::Plus ? 1.0 : -1.0) *
          symbol_q(field, t0, s.x, s.xi);
  samples.push_back(p);
  const double h = (t1 - t0) / steps;
  for (int j = 0; j < steps; ++j) {
    const double t = t0 + j * h;
    s = rk4_step(field, t, s, h, branch, sign);
    if (s.xi.norm() < xi_floor)
      throw StepFailure("ray frequency collapsed below 1e-8 of its initial size");
    PhasePoint q;
    q.t = t0 + (j + 1) * h;
    q.x = s.x;
    q.xi = s.xi;
    q.tau = (branch == RayBranch::Plus ? 1.0 : -1.0) *
            symbol_q(field, q.t, q.x, q.xi);
    samples.push_back(std::move(q));
  }
  return samples;
}

} // namespace

RayPath evolve(const CoefficientField& field, const PhasePoint& start, double t0,
               double t1, RayBranch branch, double tol, RaySign sign) {
  if (std::abs(t0) > field.time_horizon_T || std::abs(t1) > field.time_horizon_T)
    throw HorizonExceeded("ray endpoint lies outside the field's time horizon");
  if (start.xi.size() != field.dim || start.x.size() != field.dim)
    throw IndexMismatch("phase point dimension does not match the field");

  RayPath path;
  path.branch = branch;
  path.t0 = t0;
  path.t1 = t1;
  if (t0 == t1) {
    PhasePoint p = start;
    p.t = t0;
    p.tau = (branch == RayBranch::Plus ? 1.0 : -1.0) *
            symbol_q(field, t0, p.x, p.xi);
    path.samples = {p};
    return path;
  }

  const double span = std::abs(t1 - t0);
  const double h_target = std::min(std::pow(tol, 0.25), span / 64.0);
  int steps = std::max(1, static_cast<int>(std::ceil(span / h_target)));
  const double xi_floor = 1e-8 * start.xi.norm();

  std::vector<PhasePoint> coarse =
      march(field, start, t0, t1, steps, branch, sign, xi_floor);
  for (int attempt = 0; attempt < 8; ++attempt) {
    std::vector<PhasePoint> fine =
        march(field, start, t0, t1, 2 * steps, branch, sign, xi_floor);
    // RK4 is order 4, so the step-halved endpoint error estimate is
    // |fine - coarse| / 15.
    const double err = ((fine.back().x - coarse.back().x).norm() +
                        (fine.back().xi - coarse.back().xi).norm()) /
                       15.0;
    if (err <= tol) {
      path.samples = std::move(fine);
      path.richardson_error = err;
      return path;
    }
    coarse = std::move(fine);
    steps *= 2;
  }
  throw StepFailure("ray integration failed to meet tolerance under step halving");
}

FlowConstant flow_constant(const CoefficientField& field, double T, double a,
                           double box_radius) {
  if (a <= 1.0 || T < 0.0)
    throw InvalidConfig("flow constant needs a > 1 and T >= 0");
  // Gronwall envelope: |xi(t)| / |xi(0)| and the dual stay within
  // exp(L q-rate * T) where the rate is sup |q_x| / |xi| over the band.
  double rate = 0.0;
  const int samples = 7;
  for (int it = 0; it <= samples; ++it) {
    const double t = -T + 2.0 * T * it / samples;
    for (int ix = 0; ix <= samples; ++ix) {
      Vec x = Vec::Zero(field.dim);
      x(0) = -box_radius + 2.0 * box_radius * ix / samples;
      if (field.dim > 1) x(1) = 0.3 * x(0);
      for (int ir = 0; ir <= samples; ++ir) {
        const double r = 1.0 / a + (a - 1.0 / a) * ir / samples;
        for (int id = 0; id < (field.dim == 1 ? 2 : 8); ++id) {
          Vec xi = Vec::Zero(field.dim);
          if (field.dim == 1) {
            xi(0) = (id == 0 ? r : -r);
          } else {
            const double ang = 2.0 * M_PI * id / 8.0;
            xi(0) = r * std::cos(ang);
            xi(1) = r * std::sin(ang);
          }
          const SymbolGradients g = symbol_gradients(field, t, x, xi);
          rate = std::max(rate, g.q_x.norm() / xi.norm());
        }
      }
    }
  }
  FlowConstant out;
  out.lipschitz = rate;
  out.C_Ta = a * std::exp(rate * T);
  out.k0 = std::max(2.0 * std::log2(out.C_Ta), 1.0);
  return out;
}

DistanceEquivalence distance_equivalence_check(
    const CoefficientField& field,
    const std::vector<std::pair<PhasePoint, PhasePoint>>& pairs, double t,
    double tol, RaySign sign) {
  if (pairs.empty()) throw InvalidConfig("distance equivalence needs sample pairs");
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (const auto& [p, q] : pairs) {
    // Squared flow distance |xi| |x - x'|^2 + |xi - xi'|^2 / |xi|, before
    // and after transporting both points along the same branch.
    const auto d2 = [](const PhasePoint& u, const PhasePoint& v) {
      const double r = std::sqrt(u.xi.norm() * v.xi.norm());
      return r * (u.x - v.x).squaredNorm() + (u.xi - v.xi).squaredNorm() / r;
    };
    const double before = d2(p, q);
    if (before <= 0.0) continue;
    const RayPath rp = evolve(field, p, 0.0, t, RayBranch::Plus, tol, sign);
    const RayPath rq = evolve(field, q, 0.0, t, RayBranch::Plus, tol, sign);
    const double after = d2(rp.endpoint(), rq.endpoint());
    const double ratio = after / before;
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  if (!(hi > 0.0))
    throw InvalidConfig("distance equivalence saw no separated pairs");
  return DistanceEquivalence{lo, hi};
}

} // namespace gw
