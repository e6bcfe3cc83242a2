#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "gausswave/atoms.hpp"
#include "helpers.hpp"

using namespace gw;
using gw::testing::vec1;
using gw::testing::single_packet;

namespace {

Frame small_frame(int k_max = 5, double R = 3.0) {
  LatticeConfig cfg;
  cfg.k_max = k_max;
  cfg.R = R;
  return build_frame(build_frequency_lattice(1, k_max), cfg);
}

GaussianMixture random_mixture(std::mt19937_64& rng, int terms) {
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  GaussianMixture f;
  for (int t = 0; t < terms; ++t) {
    GaussianPacket p;
    p.amplitude = Complex(uni(rng), uni(rng));
    p.center = vec1(0.5 * uni(rng));
    p.frequency = vec1(4.0 + 3.0 * uni(rng));
    p.width = 1.5 + std::abs(uni(rng));
    f.terms.push_back(p);
  }
  return f;
}

} // namespace

TEST_CASE("atom evaluation: pinned values") {
  FrameAtom atom;
  atom.x = vec1(0.0);
  atom.xi = vec1(2.0);
  atom.dx = 1.0;
  atom.norm_const = std::sqrt(1.0 / M_PI);  // (|xi| dx / 2 pi)^{1/2}

  CHECK(std::abs(atom_eval(atom, vec1(0.0)) - Complex(std::sqrt(1.0 / M_PI), 0.0)) <
        1e-14);
  const Complex off = std::sqrt(1.0 / M_PI) * std::exp(Complex(-2.0, 2.0));
  CHECK(std::abs(atom_eval(atom, vec1(1.0)) - off) < 1e-14);
}

TEST_CASE("make_atom wires geometry and normalization from the index") {
  const FrequencyLattice lat = build_frequency_lattice(1, 2);
  LatticeConfig cfg;
  FrameIndex idx;
  idx.k = 2;
  idx.i = 0;
  idx.alpha = Eigen::VectorXi::Constant(1, 3);
  const FrameAtom atom = make_atom(lat, cfg, idx);
  CHECK(atom.dx == doctest::Approx(spatial_step(cfg, 2)));
  CHECK(atom.x(0) == doctest::Approx(3.0 * atom.dx));
  CHECK((atom.xi - lat.frequency(2, 0)).norm() == 0.0);
  CHECK(atom.norm_const ==
        doctest::Approx(std::sqrt(atom.xi.norm() * atom.dx / (2.0 * M_PI))));

  // ||phi||^2 = (dx^2 |xi| / 8 pi)^{1/2}, against plain quadrature.
  const double norm_sq = std::sqrt(atom.dx * atom.dx * atom.xi.norm() / (8.0 * M_PI));
  const Complex oracle = gw::testing::packet_inner_oracle(atom.packet(), atom.packet());
  CHECK(std::abs(oracle - Complex(norm_sq, 0.0)) < 1e-10);
}

TEST_CASE("analyze: pinned coefficients") {
  const Frame frame = small_frame(3, 2.0);

  SUBCASE("zero mixture analyzes to zero") {
    const CoeffSequence c = analyze(GaussianMixture{}, frame);
    CHECK(c.values.norm() == 0.0);
    CHECK(weighted_energy(c, frame) == 0.0);
  }

  SUBCASE("f equal to an atom reproduces the diagonal inner product") {
    const int g = frame.size() / 2;
    GaussianMixture f;
    f.terms.push_back(frame.atoms[g].packet());
    const CoeffSequence c = analyze(f, frame);
    const FrameAtom& atom = frame.atoms[g];
    const double diag =
        std::sqrt(atom.dx * atom.dx * atom.xi.norm() / (8.0 * M_PI));
    CHECK(std::abs(c.values(g) - Complex(diag, 0.0)) < 1e-12);
  }
}

TEST_CASE("synthesize: unit coefficient reproduces the atom, size is checked") {
  const Frame frame = small_frame(3, 2.0);
  CoeffSequence c;
  c.values = CVec::Zero(frame.size());
  const int g = frame.size() / 3;
  c.values(g) = Complex(1.0, 0.0);
  const GaussianMixture out = synthesize(c, frame);
  REQUIRE(out.terms.size() == 1);
  for (double x : {-0.7, 0.0, 0.4, 1.3})
    CHECK(std::abs(out.eval(vec1(x)) - atom_eval(frame.atoms[g], vec1(x))) < 1e-14);

  CoeffSequence bad;
  bad.values = CVec::Zero(frame.size() + 1);
  CHECK_THROWS_AS(synthesize(bad, frame), IndexMismatch);
}

TEST_CASE("frame operator is self-adjoint and positive") {
  const Frame frame = small_frame();
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 5; ++trial) {
    const GaussianMixture f = random_mixture(rng, 2);
    const GaussianMixture g = random_mixture(rng, 2);
    const GaussianMixture pf = synthesize(analyze(f, frame), frame);
    const GaussianMixture pg = synthesize(analyze(g, frame), frame);
    const Complex lhs = mixture_inner_product(pf, g);
    const Complex rhs = mixture_inner_product(f, pg);
    CHECK(std::abs(lhs - rhs) < 1e-10 * std::max(1.0, std::abs(lhs)));
    const Complex quad = mixture_inner_product(pf, f);
    CHECK(quad.real() >= -1e-12);
    CHECK(std::abs(quad.imag()) < 1e-10 * std::max(1.0, quad.real()));
  }
}

TEST_CASE("mixture inner product matches quadrature") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    const GaussianMixture f = random_mixture(rng, 2);
    const GaussianMixture g = random_mixture(rng, 2);
    Complex oracle{0.0, 0.0};
    for (const GaussianPacket& a : f.terms)
      for (const GaussianPacket& b : g.terms)
        oracle += std::conj(gw::testing::packet_inner_oracle(a, b));
    CHECK(std::abs(mixture_inner_product(f, g) - oracle) < 1e-9);
  }
}

TEST_CASE("Sobolev norm: closed form for a single packet, m = 0 consistency") {
  const GaussianMixture f = single_packet(0.8, -0.3, 0.4, 5.0, 1.5);
  const double a2 = std::norm(f.terms[0].amplitude);
  const double w = f.terms[0].width;
  const double eta = f.terms[0].frequency(0);
  // ||f||^2_{H^1} = |a|^2 (pi/w) sqrt(2 pi w) (eta^2 + w) / (2 pi).
  const double expected =
      a2 * (M_PI / w) * std::sqrt(2.0 * M_PI * w) * (eta * eta + w) / (2.0 * M_PI);
  CHECK(mixture_sobolev_norm_sq(f, 1.0, 1) == doctest::Approx(expected).epsilon(1e-8));
  CHECK(mixture_sobolev_norm_sq(f, 0.0, 1) ==
        doctest::Approx(mixture_inner_product(f, f).real()).epsilon(1e-12));
}

TEST_CASE("partition sum: bounds, lattice points, band guards") {
  const FrequencyLattice lat = build_frequency_lattice(1, 8);

  SUBCASE("lower bound e^{-1} across the band") {
    for (int j = 0; j < 100; ++j) {
      const double r = 0.5 * std::pow(256.0, j / 99.0);  // [0.5, 128]
      for (double s : {1.0, -1.0}) {
        const PartitionSum p = partition_sum(lat, vec1(s * r), 0.0);
        CHECK(p.value >= std::exp(-1.0));
        CHECK(std::isfinite(p.value));
        CHECK(p.tail_bound >= 0.0);
      }
    }
  }
  SUBCASE("at a lattice point the self term alone gives >= 1") {
    const Vec xi = lat.frequency(4, 0);
    CHECK(partition_sum(lat, xi, 0.0).value >= 1.0);
  }
  SUBCASE("out-of-band arguments are rejected") {
    CHECK_THROWS_AS(partition_sum(lat, vec1(0.0), 0.0), OutOfBand);
    CHECK_THROWS_AS(partition_sum(lat, vec1(0.1), 0.0), OutOfBand);
    CHECK_THROWS_AS(partition_sum(lat, vec1(200.0), 0.0), OutOfBand);
  }
}

TEST_CASE("frame ratio: scale invariance and band guard") {
  const Frame frame = small_frame();
  GaussianMixture f = single_packet(1.0, 0.0, 0.0, 6.0, 1.0);
  const double r1 = frame_ratio(f, frame, 0.0);
  GaussianMixture f3 = f;
  f3.terms[0].amplitude *= Complex(3.0, -1.0);
  CHECK(frame_ratio(f3, frame, 0.0) == doctest::Approx(r1).epsilon(1e-10));
  CHECK(r1 > 0.0);

  const GaussianMixture low = single_packet(1.0, 0.0, 0.0, 0.5, 1.0);
  CHECK_THROWS_AS(frame_ratio(low, frame, 0.0), OutOfBand);
}

TEST_CASE("discrete versus continuous energy deviation obeys the stated bound") {
  const Frame frame = small_frame(5, 3.0);
  const GaussianMixture f = single_packet(1.0, 0.0, 0.2, 4.0, 1.0);
  const double l2 = mixture_inner_product(f, f).real();
  CHECK(lemma2_deviation(f, frame) <= 0.5 * M_PI * std::exp(-1.0) * l2);
}

TEST_CASE("band membership") {
  const FrequencyLattice lat = build_frequency_lattice(1, 5);
  CHECK(in_band(lat, 1.0));
  CHECK(in_band(lat, 16.0));
  CHECK_FALSE(in_band(lat, 0.4));
  CHECK_FALSE(in_band(lat, 17.0));
}
