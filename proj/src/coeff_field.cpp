#include "gausswave/coeff_field.hpp"

#include <cmath>

namespace gw {

namespace {

std::vector<Mat> finite_difference_grad(const CoefficientField::EvalFn& eval,
                                        int n, double t, const Vec& x,
                                        double h = 1e-5) {
  std::vector<Mat> out(n);
  for (int l = 0; l < n; ++l) {
    Vec xp = x, xm = x;
    xp(l) += h;
    xm(l) -= h;
    out[l] = (eval(t, xp) - eval(t, xm)) / (2.0 * h);
  }
  return out;
}

} // namespace

double symbol_q(const CoefficientField& field, double t, const Vec& x, const Vec& xi) {
  const double form = xi.dot(field.eval(t, x) * xi);
  if (form <= 0.0)
    throw NonEllipticField("quadratic form non-positive at sampled point");
  return std::sqrt(form);
}

SymbolGradients symbol_gradients(const CoefficientField& field, double t,
                                 const Vec& x, const Vec& xi) {
  const Mat A = field.eval(t, x);
  const double form = xi.dot(A * xi);
  if (form <= 0.0)
    throw NonEllipticField("quadratic form non-positive at sampled point");
  const double q = std::sqrt(form);
  SymbolGradients g;
  g.q_xi = (A * xi) / q;
  const std::vector<Mat> dA = field.grad_x(t, x);
  g.q_x.resize(field.dim);
  for (int l = 0; l < field.dim; ++l) g.q_x(l) = xi.dot(dA[l] * xi) / (2.0 * q);
  return g;
}

CoefficientField make_identity_field(int n, double T) {
  CoefficientField f;
  f.dim = n;
  f.name = "identity";
  f.time_horizon_T = T;
  f.eval = [n](double, const Vec&) { return Mat::Identity(n, n); };
  f.grad_x = [n](double, const Vec&) {
    return std::vector<Mat>(n, Mat::Zero(n, n));
  };
  f.ellipticity_C = 1.0 + 1e-12;
  f.lipschitz_L = 0.0;
  return f;
}

CoefficientField make_constant_field(const Mat& A, double T) {
  CoefficientField f;
  f.dim = static_cast<int>(A.rows());
  f.name = "constant";
  f.time_horizon_T = T;
  const Mat Asym = 0.5 * (A + A.transpose());
  f.eval = [Asym](double, const Vec&) { return Asym; };
  const int n = f.dim;
  f.grad_x = [n](double, const Vec&) {
    return std::vector<Mat>(n, Mat::Zero(n, n));
  };
  Eigen::SelfAdjointEigenSolver<Mat> es(Asym);
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  if (lo <= 0.0) throw NonEllipticField("constant field is not positive definite");
  f.ellipticity_C = std::max(hi, 1.0 / lo) + 1e-12;
  f.lipschitz_L = 0.0;
  return f;
}

CoefficientField make_perturbed_identity_field(int n, double amplitude, double T) {
  if (std::abs(amplitude) >= 1.0)
    throw InvalidConfig("perturbation amplitude must satisfy |a| < 1");
  CoefficientField f;
  f.dim = n;
  f.name = "perturbed_identity";
  f.time_horizon_T = T;
  f.eval = [n, amplitude](double, const Vec& x) {
    return Mat((1.0 + amplitude * std::sin(x(0))) * Mat::Identity(n, n));
  };
  f.grad_x = [n, amplitude](double, const Vec& x) {
    std::vector<Mat> g(n, Mat::Zero(n, n));
    g[0] = amplitude * std::cos(x(0)) * Mat::Identity(n, n);
    return g;
  };
  f.ellipticity_C = std::max(1.0 + std::abs(amplitude),
                             1.0 / (1.0 - std::abs(amplitude))) + 1e-12;
  f.lipschitz_L = std::abs(amplitude);
  return f;
}

CoefficientField make_custom_field(int n, CoefficientField::EvalFn eval, double T) {
  CoefficientField f;
  f.dim = n;
  f.name = "custom";
  f.time_horizon_T = T;
  f.eval = std::move(eval);
  const auto ev = f.eval;
  f.grad_x = [ev, n](double t, const Vec& x) {
    return finite_difference_grad(ev, n, t, x);
  };
  return f;
}

CoefficientField make_field_by_name(const std::string& name, int n,
                                    const std::vector<double>& params, double T) {
  if (name == "identity") return make_identity_field(n, T);
  if (name == "constant") {
    if (static_cast<int>(params.size()) != n * n)
      throw InvalidConfig("constant field needs n*n parameters (row major)");
    Mat A(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) A(i, j) = params[i * n + j];
    return make_constant_field(A, T);
  }
  if (name == "perturbed_identity") {
    if (params.size() != 1)
      throw InvalidConfig("perturbed_identity field needs one amplitude parameter");
    return make_perturbed_identity_field(n, params[0], T);
  }
  throw InvalidConfig("unknown field name: " + name);
}

void certify_constants(CoefficientField& field, double box_radius,
                       int samples_per_axis) {
  const int n = field.dim;
  const int nt = samples_per_axis;
  double worst_C = 1.0;
  double worst_L = 0.0;
  // Unit-sphere directions for the ellipticity scan.
  std::vector<Vec> dirs;
  const int ndir = (n == 1) ? 2 : 16;
  for (int d = 0; d < ndir; ++d) {
    Vec v(n);
    if (n == 1) {
      v(0) = (d == 0) ? 1.0 : -1.0;
    } else {
      const double ang = 2.0 * M_PI * d / ndir;
      v(0) = std::cos(ang);
      v(1) = std::sin(ang);
    }
    dirs.push_back(v);
  }
  std::vector<double> grid;
  for (int s = 0; s < samples_per_axis; ++s)
    grid.push_back(-box_radius + 2.0 * box_radius * s / (samples_per_axis - 1));

  const auto visit = [&](double t, const Vec& x) {
    const Mat A = field.eval(t, x);
    if ((A - A.transpose()).cwiseAbs().maxCoeff() > 1e-12)
      throw NonEllipticField("field matrix not symmetric");
    for (const Vec& v : dirs) {
      const double form = v.dot(A * v);
      if (form <= 0.0) throw NonEllipticField("field not positive definite");
      worst_C = std::max({worst_C, form, 1.0 / form});
    }
    const std::vector<Mat> dA = field.grad_x(t, x);
    for (const Mat& m : dA) worst_L = std::max(worst_L, m.cwiseAbs().maxCoeff());
  };

  for (int it = 0; it < nt; ++it) {
    const double t = -field.time_horizon_T +
                     2.0 * field.time_horizon_T * it / std::max(1, nt - 1);
    if (n == 1) {
      for (double gx : grid) {
        Vec x(1);
        x << gx;
        visit(t, x);
      }
    } else {
      for (double gx : grid)
        for (double gy : grid) {
          Vec x(2);
          x << gx, gy;
          visit(t, x);
        }
    }
  }
  field.ellipticity_C = worst_C + 1e-12;
  field.lipschitz_L = worst_L;
}

} // namespace gw
