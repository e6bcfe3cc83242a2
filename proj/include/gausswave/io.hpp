#pragma once

#include <string>
#include <vector>

#include "gausswave/atoms.hpp"
#include "gausswave/coeff_field.hpp"
#include "gausswave/gram.hpp"
#include "gausswave/rays.hpp"

namespace gw {

// Flat key=value run configuration with [section] headers; unknown keys are
// rejected with a line diagnostic.
struct RunConfig {
  int dim = 1;
  int k_max = 4;
  double epsilon = 0.25;
  double C_eps = 1.0;
  double R = 1.0;
  double T = 1.0;
  std::string field_name = "identity";
  std::vector<double> field_params;
  double ray_tol = 1e-9;
  double quad_tol = 1e-10;
  double prune_threshold = 1e-12;
  double volterra_tol = 1e-8;
  double solve_time = 0.5;
  std::string out_dir = ".";
  RaySign ray_sign = RaySign::Paper;

  void validate() const;  // throws ConfigError naming the violated constraint
};

RunConfig parse_config(const std::string& path);
RunConfig parse_config_text(const std::string& text, const std::string& origin);

LatticeConfig lattice_config(const RunConfig& rc);

// CSV writers; all deterministic, fixed 17-significant-digit formatting.
void write_lattice_csv(const std::string& path, const FrequencyLattice& lattice);
void write_coeffs_csv(const std::string& path, const Frame& frame,
                      const CVec& values);
void write_mixture_csv(const std::string& path, const GaussianMixture& f);
void write_ray_csv(const std::string& path, const RayPath& path_data);
void write_sparse_csv(const std::string& path, const Frame& frame,
                      const SparseOperator& op);
void write_snapshot_csv(const std::string& path, const std::vector<Vec>& xs,
                        const std::vector<Complex>& values);

// Mixture CSV: header re_a,im_a,y...,eta...,w; throws ConfigError with the
// offending line number on malformed input.
GaussianMixture read_mixture_csv(const std::string& path, int dim);

} // namespace gw
