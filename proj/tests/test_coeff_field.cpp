#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gausswave/coeff_field.hpp"
#include "helpers.hpp"

using namespace gw;
using gw::testing::vec1;
using gw::testing::vec2;

TEST_CASE("symbol value: pinned examples") {
  const CoefficientField id2 = make_identity_field(2);
  CHECK(symbol_q(id2, 0.0, vec2(0.0, 0.0), vec2(3.0, 4.0)) ==
        doctest::Approx(5.0).epsilon(1e-14));

  Mat A(2, 2);
  A << 4.0, 0.0, 0.0, 1.0;
  const CoefficientField diag = make_constant_field(A);
  CHECK(symbol_q(diag, 0.0, vec2(0.0, 0.0), vec2(1.0, 0.0)) ==
        doctest::Approx(2.0).epsilon(1e-14));

  const CoefficientField pert = make_perturbed_identity_field(2, 0.1);
  CHECK(symbol_q(pert, 0.0, vec2(M_PI / 2.0, 0.0), vec2(1.0, 1.0)) ==
        doctest::Approx(std::sqrt(2.2)).epsilon(1e-12));
  CHECK(symbol_q(pert, 0.0, vec2(M_PI / 2.0, 0.0), vec2(1.0, 1.0)) ==
        doctest::Approx(1.4832397).epsilon(1e-6));
}

TEST_CASE("symbol is 1-homogeneous in xi") {
  const CoefficientField pert = make_perturbed_identity_field(2, 0.3);
  const Vec x = vec2(0.7, -0.4);
  const Vec xi = vec2(1.3, -2.1);
  const double q1 = symbol_q(pert, 0.2, x, xi);
  for (double c : {0.5, 2.0, 16.0}) {
    CHECK(symbol_q(pert, 0.2, x, c * xi) == doctest::Approx(c * q1).epsilon(1e-12));
  }
}

TEST_CASE("symbol gradients: pinned examples") {
  const CoefficientField id2 = make_identity_field(2);
  const SymbolGradients g = symbol_gradients(id2, 0.0, vec2(0.0, 0.0), vec2(0.0, 2.0));
  CHECK(g.q_xi(0) == doctest::Approx(0.0));
  CHECK(g.q_xi(1) == doctest::Approx(1.0));
  CHECK(g.q_x.norm() == doctest::Approx(0.0));

  Mat A(2, 2);
  A << 4.0, 0.0, 0.0, 1.0;
  const CoefficientField diag = make_constant_field(A);
  const SymbolGradients gd =
      symbol_gradients(diag, 0.0, vec2(0.0, 0.0), vec2(1.0, 0.0));
  CHECK(gd.q_xi(0) == doctest::Approx(2.0));
  CHECK(gd.q_xi(1) == doctest::Approx(0.0));
}

TEST_CASE("gradients match finite differences of the symbol") {
  const CoefficientField pert = make_perturbed_identity_field(2, 0.2);
  const double t = 0.1;
  const Vec x = vec2(0.4, 0.9);
  const Vec xi = vec2(2.0, -1.5);
  const SymbolGradients g = symbol_gradients(pert, t, x, xi);
  const double h = 1e-4;
  for (int d = 0; d < 2; ++d) {
    Vec xp = x, xm = x;
    xp(d) += h;
    xm(d) -= h;
    const double fd_x = (symbol_q(pert, t, xp, xi) - symbol_q(pert, t, xm, xi)) /
                        (2.0 * h);
    CHECK(std::abs(g.q_x(d) - fd_x) < 1e-5 * std::max(1.0, std::abs(fd_x)));
    Vec qp = xi, qm = xi;
    qp(d) += h;
    qm(d) -= h;
    const double fd_xi = (symbol_q(pert, t, x, qp) - symbol_q(pert, t, x, qm)) /
                         (2.0 * h);
    CHECK(std::abs(g.q_xi(d) - fd_xi) < 1e-5 * std::max(1.0, std::abs(fd_xi)));
  }
}

TEST_CASE("gradient homogeneity degrees in xi") {
  const CoefficientField pert = make_perturbed_identity_field(1, 0.4);
  const Vec x = vec1(0.3);
  const Vec xi = vec1(1.7);
  const SymbolGradients g1 = symbol_gradients(pert, 0.0, x, xi);
  const SymbolGradients g8 = symbol_gradients(pert, 0.0, x, 8.0 * xi);
  CHECK(g8.q_xi(0) == doctest::Approx(g1.q_xi(0)).epsilon(1e-12));   // degree 0
  CHECK(g8.q_x(0) == doctest::Approx(8.0 * g1.q_x(0)).epsilon(1e-12));  // degree 1
}

TEST_CASE("custom fields get finite-difference gradients") {
  const CoefficientField f = make_custom_field(1, [](double, const Vec& x) {
    Mat A(1, 1);
    A << 2.0 + std::tanh(x(0));
    return A;
  });
  const std::vector<Mat> dA = f.grad_x(0.0, vec1(0.25));
  const double sech = 1.0 / std::cosh(0.25);
  CHECK(dA[0](0, 0) == doctest::Approx(sech * sech).epsilon(1e-7));
}

TEST_CASE("non-elliptic data is rejected") {
  const CoefficientField bad = make_custom_field(1, [](double, const Vec& x) {
    Mat A(1, 1);
    A << -1.0 + x(0) * 0.0;
    return A;
  });
  CHECK_THROWS_AS(symbol_q(bad, 0.0, vec1(0.0), vec1(1.0)), NonEllipticField);

  Mat neg(1, 1);
  neg << -2.0;
  CHECK_THROWS_AS(make_constant_field(neg), NonEllipticField);

  CHECK_THROWS_AS(make_perturbed_identity_field(1, 1.5), InvalidConfig);
}

TEST_CASE("certified constants cover sampled ellipticity and Lipschitz rate") {
  CoefficientField pert = make_perturbed_identity_field(1, 0.3);
  certify_constants(pert, 2.0);
  CHECK(pert.ellipticity_C >= 1.3);          // sup of 1 + 0.3 sin over the box
  CHECK(pert.ellipticity_C <= 1.0 / 0.7 + 1e-6);
  CHECK(pert.lipschitz_L == doctest::Approx(0.3).epsilon(1e-2));

  CoefficientField id1 = make_identity_field(1);
  certify_constants(id1, 2.0);
  CHECK(id1.ellipticity_C == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(id1.lipschitz_L == 0.0);
}

TEST_CASE("field selection by name") {
  CHECK(make_field_by_name("identity", 1, {}, 1.0).name == "identity");
  CHECK(make_field_by_name("constant", 1, {2.0}, 1.0).eval(0.0, vec1(0.0))(0, 0) ==
        doctest::Approx(2.0));
  CHECK(make_field_by_name("perturbed_identity", 1, {0.2}, 1.0).name ==
        "perturbed_identity");
  CHECK_THROWS_AS(make_field_by_name("unknown", 1, {}, 1.0), InvalidConfig);
  CHECK_THROWS_AS(make_field_by_name("constant", 2, {1.0}, 1.0), InvalidConfig);
}
