#pragma once

#include <functional>
#include <string>
#include <vector>

#include "gausswave/errors.hpp"
#include "gausswave/types.hpp"

namespace gw {

// Coefficient matrix A(t,x) of the wave operator d_t^2 - sum a_ij d_i d_j,
// together with the sampled constants the flow and Schur estimates use.
// Immutable after construction; all evaluation is pure.
struct CoefficientField {
  using EvalFn = std::function<Mat(double t, const Vec& x)>;
  using GradFn = std::function<std::vector<Mat>(double t, const Vec& x)>;

  int dim = 1;
  EvalFn eval;
  GradFn grad_x;              // d/dx_l of each a_ij; l-th entry of the vector
  double ellipticity_C = 1.0; // |xi|^2/C <= xi'A xi <= C |xi|^2
  double lipschitz_L = 0.0;
  double time_horizon_T = 1.0;
  std::string name = "custom";
};

// sqrt(sum a_ij xi_i xi_j); throws NonEllipticField if the form is <= 0.
double symbol_q(const CoefficientField& field, double t, const Vec& x, const Vec& xi);

struct SymbolGradients {
  Vec q_x;   // 1-homogeneous in xi
  Vec q_xi;  // 0-homogeneous in xi
};
SymbolGradients symbol_gradients(const CoefficientField& field, double t,
                                 const Vec& x, const Vec& xi);

// Built-in field library. User fields supply eval only and receive a
// central finite-difference grad_x (h = 1e-5).
CoefficientField make_identity_field(int n, double T = 1.0);
CoefficientField make_constant_field(const Mat& A, double T = 1.0);
// A(t,x) = (1 + amplitude * sin(x_1)) * Id, with analytic gradient.
CoefficientField make_perturbed_identity_field(int n, double amplitude,
                                               double T = 1.0);
CoefficientField make_custom_field(int n, CoefficientField::EvalFn eval,
                                   double T = 1.0);

// Field selection by name + parameters, as used by the solver config.
CoefficientField make_field_by_name(const std::string& name, int n,
                                    const std::vector<double>& params,
                                    double T);

// Dense-sampling certification of ellipticity and Lipschitz constants
// over the box |x| <= box_radius, |t| <= T. Updates the field in place.
void certify_constants(CoefficientField& field, double box_radius,
                       int samples_per_axis = 9);

} // namespace gw
