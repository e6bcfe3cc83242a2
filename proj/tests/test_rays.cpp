#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "gausswave/rays.hpp"
#include "helpers.hpp"

using namespace gw;
using gw::testing::vec1;
using gw::testing::vec2;

namespace {

PhasePoint point(const Vec& x, const Vec& xi) {
  PhasePoint p;
  p.x = x;
  p.xi = xi;
  return p;
}

} // namespace

TEST_CASE("identity field: straight rays with the printed sign convention") {
  const CoefficientField id = make_identity_field(1);

  SUBCASE("plus branch drifts against the frequency direction") {
    const RayPath path = evolve(id, point(vec1(0.0), vec1(4.0)), 0.0, 1.0,
                                RayBranch::Plus);
    CHECK(path.endpoint().x(0) == doctest::Approx(-1.0).epsilon(1e-10));
    CHECK(path.endpoint().xi(0) == doctest::Approx(4.0).epsilon(1e-12));
    for (const PhasePoint& p : path.samples)
      CHECK(p.tau == doctest::Approx(4.0).epsilon(1e-10));
  }
  SUBCASE("minus branch flips the drift and tau") {
    const RayPath path = evolve(id, point(vec1(0.0), vec1(4.0)), 0.0, 1.0,
                                RayBranch::Minus);
    CHECK(path.endpoint().x(0) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(path.endpoint().tau == doctest::Approx(-4.0).epsilon(1e-10));
  }
  SUBCASE("standard sign flips the spatial drift again") {
    const RayPath path = evolve(id, point(vec1(0.0), vec1(4.0)), 0.0, 1.0,
                                RayBranch::Plus, 1e-10, RaySign::Standard);
    CHECK(path.endpoint().x(0) == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("right-hand side: branch and sign composition on a variable field") {
  const CoefficientField pert = make_perturbed_identity_field(1, 0.3);
  PhasePoint p = point(vec1(0.4), vec1(2.5));
  p.t = 0.2;
  const SymbolGradients g = symbol_gradients(pert, p.t, p.x, p.xi);
  const RayRhs plus = ray_rhs(pert, p, RayBranch::Plus);
  CHECK((plus.dx_dt + g.q_xi).norm() < 1e-14);
  CHECK((plus.dxi_dt - g.q_x).norm() < 1e-14);
  const RayRhs minus = ray_rhs(pert, p, RayBranch::Minus);
  CHECK((minus.dx_dt + plus.dx_dt).norm() < 1e-14);
  CHECK((minus.dxi_dt + plus.dxi_dt).norm() < 1e-14);
  const RayRhs std_plus = ray_rhs(pert, p, RayBranch::Plus, RaySign::Standard);
  CHECK((std_plus.dx_dt + plus.dx_dt).norm() < 1e-14);
}

TEST_CASE("frequency scaling: paths commute with dilation of xi") {
  const CoefficientField pert = make_perturbed_identity_field(1, 0.3);
  const PhasePoint base = point(vec1(0.2), vec1(1.5));
  const RayPath ref = evolve(pert, base, 0.0, 0.7, RayBranch::Plus, 1e-11);
  for (double c : {1.0 / 16.0, 16.0}) {
    const RayPath scaled =
        evolve(pert, point(vec1(0.2), vec1(1.5 * c)), 0.0, 0.7, RayBranch::Plus,
               1e-11);
    CHECK(std::abs(scaled.endpoint().x(0) - ref.endpoint().x(0)) < 1e-8);
    CHECK(std::abs(scaled.endpoint().xi(0) - c * ref.endpoint().xi(0)) <
          1e-8 * c * 1.5);
  }
}

TEST_CASE("forward-backward composition returns to the start") {
  const CoefficientField pert = make_perturbed_identity_field(2, 0.2);
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  const double tol = 1e-10;
  for (int trial = 0; trial < 10; ++trial) {
    const PhasePoint start =
        point(vec2(0.5 * uni(rng), 0.5 * uni(rng)),
              vec2(2.0 + uni(rng), 2.0 + uni(rng)));
    for (RayBranch br : {RayBranch::Plus, RayBranch::Minus}) {
      const RayPath fwd = evolve(pert, start, 0.0, 0.6, br, tol);
      const RayPath back = evolve(pert, fwd.endpoint(), 0.6, 0.0, br, tol);
      CHECK((back.endpoint().x - start.x).norm() < 10.0 * tol);
      CHECK((back.endpoint().xi - start.xi).norm() < 10.0 * tol);
    }
  }
}

TEST_CASE("symbol value is conserved along rays of a static field") {
  const CoefficientField pert = make_perturbed_identity_field(1, 0.3);
  const RayPath path =
      evolve(pert, point(vec1(0.1), vec1(3.0)), 0.0, 0.9, RayBranch::Plus, 1e-11);
  const double q0 = std::abs(path.samples.front().tau);
  for (const PhasePoint& p : path.samples)
    CHECK(std::abs(std::abs(p.tau) - q0) < 1e-8 * q0);
}

TEST_CASE("degenerate and invalid requests") {
  const CoefficientField id = make_identity_field(1);
  const RayPath frozen = evolve(id, point(vec1(0.3), vec1(2.0)), 0.5, 0.5,
                                RayBranch::Plus);
  REQUIRE(frozen.samples.size() == 1);
  CHECK(frozen.endpoint().t == 0.5);
  CHECK(frozen.endpoint().x(0) == 0.3);
  CHECK(frozen.endpoint().tau == doctest::Approx(2.0));

  CHECK_THROWS_AS(evolve(id, point(vec1(0.0), vec1(1.0)), 0.0, 1.5,
                         RayBranch::Plus),
                  HorizonExceeded);
  CHECK_THROWS_AS(evolve(id, point(vec2(0.0, 0.0), vec2(1.0, 0.0)), 0.0, 0.5,
                         RayBranch::Plus),
                  IndexMismatch);
}

TEST_CASE("drift and Gronwall envelopes on the perturbed field") {
  // q = sqrt(1 + 0.3 sin x) |xi|: |dx/dt| <= sqrt(1.3) and
  // |d log|xi| / dt| <= 0.15 / sqrt(0.7).
  const CoefficientField pert = make_perturbed_identity_field(1, 0.3);
  const double speed = std::sqrt(1.3);
  const double rate = 0.15 / std::sqrt(0.7);
  std::mt19937_64 rng(59);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const PhasePoint start =
        point(vec1(0.5 * uni(rng)), vec1((uni(rng) > 0 ? 1.0 : -1.0) *
                                         std::pow(2.0, 3.0 * uni(rng) + 1.0)));
    const RayBranch br = (trial % 2 == 0) ? RayBranch::Plus : RayBranch::Minus;
    const RayPath path = evolve(pert, start, 0.0, 1.0, br, 1e-10);
    const double xi0 = start.xi.norm();
    for (const PhasePoint& p : path.samples) {
      CHECK(std::abs(p.x(0) - start.x(0)) <= speed * p.t + 1e-9);
      CHECK(p.xi.norm() <= xi0 * std::exp(rate * p.t) * (1.0 + 1e-9));
      CHECK(p.xi.norm() >= xi0 * std::exp(-rate * p.t) * (1.0 - 1e-9));
    }
  }
}

TEST_CASE("flow constant: pinned values") {
  const CoefficientField id = make_identity_field(1);
  const FlowConstant fc = flow_constant(id, 0.8, 2.0);
  CHECK(fc.lipschitz == 0.0);
  CHECK(fc.C_Ta == doctest::Approx(2.0));
  CHECK(fc.k0 == doctest::Approx(2.0));  // max(2 log2 2, 1)

  const CoefficientField pert = make_perturbed_identity_field(1, 0.3);
  const FlowConstant fp = flow_constant(pert, 0.8, 2.0);
  CHECK(fp.lipschitz > 0.0);
  CHECK(fp.lipschitz <= 0.15 / std::sqrt(0.7) + 1e-9);
  CHECK(fp.C_Ta >= 2.0);
  CHECK(fp.k0 >= 2.0);

  CHECK_THROWS_AS(flow_constant(id, 0.5, 1.0), InvalidConfig);
}

TEST_CASE("flow distance equivalence ratios") {
  std::vector<std::pair<PhasePoint, PhasePoint>> pairs;
  std::mt19937_64 rng(71);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (int trial = 0; trial < 15; ++trial) {
    const double xi = 4.0 + 2.0 * uni(rng);
    pairs.emplace_back(point(vec1(0.3 * uni(rng)), vec1(xi)),
                       point(vec1(0.3 * uni(rng)), vec1(xi + 0.5 * uni(rng))));
  }

  SUBCASE("t = 0 leaves every distance unchanged") {
    const CoefficientField pert = make_perturbed_identity_field(1, 0.3);
    const DistanceEquivalence d = distance_equivalence_check(pert, pairs, 0.0);
    CHECK(d.D1 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(d.D2 == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("constant field transport is an isometry of the flow distance") {
    const CoefficientField id = make_identity_field(1);
    const DistanceEquivalence d = distance_equivalence_check(id, pairs, 0.4);
    CHECK(d.D1 == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(d.D2 == doctest::Approx(1.0).epsilon(1e-9));
  }
  SUBCASE("variable field ratios stay within a two-sided constant") {
    const CoefficientField pert = make_perturbed_identity_field(1, 0.3);
    const DistanceEquivalence d = distance_equivalence_check(pert, pairs, 0.5);
    CHECK(d.D1 > 0.25);
    CHECK(d.D2 < 4.0);
    CHECK(d.D1 <= d.D2);
  }
  SUBCASE("empty sample set is rejected") {
    const CoefficientField id = make_identity_field(1);
    CHECK_THROWS_AS(distance_equivalence_check(id, {}, 0.1), InvalidConfig);
  }
}
