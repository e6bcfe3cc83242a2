// Command-line driver: lattice construction, frame verification, ray
// propagation, operator assembly, Cauchy solves and report printing.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "gausswave/io.hpp"
#include "gausswave/parametrix.hpp"
#include "gausswave/quadrature.hpp"
#include "gausswave/theta.hpp"

namespace {

using namespace gw;

struct CommonFlags {
  std::string config_path;
  std::string out_dir;
  int threads = 1;
  std::string ray_sign;
  std::uint64_t seed = 1;
};

void add_common(CLI::App* cmd, CommonFlags& fl, bool config_required = true) {
  auto* c = cmd->add_option("--config", fl.config_path, "run configuration file");
  if (config_required) c->required();
  cmd->add_option("--out", fl.out_dir, "output directory (overrides config)");
  cmd->add_option("--threads", fl.threads, "worker thread count");
  cmd->add_option("--ray-sign", fl.ray_sign,
                  "bicharacteristic sign convention: paper|standard");
  cmd->add_option("--seed", fl.seed, "seed for randomized verification draws");
}

RunConfig load_config(const CommonFlags& fl) {
  RunConfig rc = parse_config(fl.config_path);
  if (!fl.out_dir.empty()) rc.out_dir = fl.out_dir;
  if (fl.ray_sign == "paper") rc.ray_sign = RaySign::Paper;
  else if (fl.ray_sign == "standard") rc.ray_sign = RaySign::Standard;
  else if (!fl.ray_sign.empty())
    throw ConfigError("--ray-sign must be 'paper' or 'standard'");
  std::filesystem::create_directories(rc.out_dir);
  return rc;
}

CoefficientField field_of(const RunConfig& rc) {
  CoefficientField field =
      make_field_by_name(rc.field_name, rc.dim, rc.field_params, rc.T);
  certify_constants(field, rc.R + 2.0);
  return field;
}

std::string out_path(const RunConfig& rc, const std::string& name) {
  return (std::filesystem::path(rc.out_dir) / name).string();
}

struct CheckSheet {
  std::ofstream os;
  bool all_pass = true;

  explicit CheckSheet(const std::string& path) : os(path) {
    os << "check,measured,bound,pass\n";
  }
  void row(const std::string& name, double measured, double bound, bool pass) {
    os << name << "," << measured << "," << bound << "," << (pass ? 1 : 0)
       << "\n";
    std::cout << (pass ? "pass" : "FAIL") << "  " << name
              << "  measured=" << measured << "  bound=" << bound << "\n";
    all_pass = all_pass && pass;
  }
};

int cmd_lattice(const CommonFlags& fl) {
  const RunConfig rc = load_config(fl);
  const FrequencyLattice lattice = build_frequency_lattice(rc.dim, rc.k_max);
  write_lattice_csv(out_path(rc, "lattice.csv"), lattice);
  const std::vector<FrameIndex> gamma = enumerate_gamma(lattice, lattice_config(rc));
  std::cout << "levels=" << lattice.k_max + 1 << " atoms=" << gamma.size() << "\n";
  return 0;
}

int cmd_verify(const CommonFlags& fl) {
  const RunConfig rc = load_config(fl);
  std::mt19937_64 rng(fl.seed);
  CheckSheet sheet(out_path(rc, "report.csv"));

  // Theta sums against the closed upper bound.
  {
    double worst_ratio = 0.0;
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (double lambda : {1.0, 4.0, 16.0}) {
      const double bound = std::pow(2.0 * M_PI * lambda, 0.5 * rc.dim);
      for (int trial = 0; trial < 20; ++trial) {
        ThetaParams tp;
        tp.lambda = lambda;
        tp.n = rc.dim;
        tp.eps0 = Vec::Zero(rc.dim);
        for (int d = 0; d < rc.dim; ++d) tp.eps0(d) = uni(rng);
        worst_ratio = std::max(worst_ratio, theta_sum(tp) / bound);
      }
    }
    sheet.row("theta_upper_bound_ratio", worst_ratio, 1.0, worst_ratio <= 1.0);
  }

  const FrequencyLattice lattice = build_frequency_lattice(rc.dim, rc.k_max);
  const Frame frame = build_frame(lattice, lattice_config(rc));

  // Partition-of-unity window over in-band frequencies.
  {
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    const double r0 = 1.0, r1 = std::ldexp(1.0, rc.k_max - 1);
    for (int j = 0; j < 50; ++j) {
      const double r = r0 * std::pow(r1 / r0, j / 49.0);
      Vec xi = Vec::Zero(rc.dim);
      xi(0) = r;
      const PartitionSum s = partition_sum(lattice, xi, 0.0);
      lo = std::min(lo, s.value);
      hi = std::max(hi, s.value);
    }
    sheet.row("partition_lower", lo, std::exp(-1.0), lo >= std::exp(-1.0));
    sheet.row("partition_upper", hi, 0.0, std::isfinite(hi));
  }

  // Frame ratio window over random in-band packets.
  {
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (int trial = 0; trial < 5; ++trial) {
      GaussianMixture f;
      GaussianPacket p;
      p.center = Vec::Zero(rc.dim);
      p.center(0) = 0.4 * (uni(rng) - 0.5);
      p.frequency = Vec::Zero(rc.dim);
      p.frequency(0) = 2.0 + (std::ldexp(1.0, rc.k_max - 1) - 4.0) * uni(rng);
      p.width = 1.0 + 3.0 * uni(rng);
      f.terms.push_back(p);
      const double ratio = frame_ratio(f, frame, 0.0);
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
    }
    sheet.row("frame_ratio_spread", hi / lo, 1e4, hi / lo < 1e4 && lo > 0.0);
  }

  const CoefficientField field = field_of(rc);

  // Ray forward-backward composition returns the start.
  {
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    double worst = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
      PhasePoint start;
      start.x = Vec::Zero(rc.dim);
      start.xi = Vec::Zero(rc.dim);
      for (int d = 0; d < rc.dim; ++d) {
        start.x(d) = uni(rng);
        start.xi(d) = 4.0 + 2.0 * uni(rng);
      }
      const RayPath fwd = evolve(field, start, 0.0, 0.5 * rc.T, RayBranch::Plus,
                                 rc.ray_tol, rc.ray_sign);
      PhasePoint mid = fwd.endpoint();
      const RayPath bwd = evolve(field, mid, 0.5 * rc.T, 0.0, RayBranch::Plus,
                                 rc.ray_tol, rc.ray_sign);
      worst = std::max(worst, (bwd.endpoint().x - start.x).norm() +
                                  (bwd.endpoint().xi - start.xi).norm());
    }
    sheet.row("ray_inverse_composition", worst, 10.0 * rc.ray_tol,
              worst < 10.0 * rc.ray_tol);
  }

  // Closed-form Gram entries against quadrature (1-D only).
  if (rc.dim == 1) {
    std::uniform_int_distribution<int> pick(0, frame.size() - 1);
    const std::vector<PropagatedAtom> cols =
        propagate_atoms(field, frame, 0.0, 0.0, RayBranch::Plus, rc.ray_tol,
                        rc.ray_sign);
    double worst = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
      const FrameAtom& a = frame.atoms[pick(rng)];
      const FrameAtom& b = frame.atoms[pick(rng)];
      const auto integrand = [&](double x) {
        Vec v(1);
        v << x;
        return std::conj(atom_eval(a, v)) * atom_eval(b, v);
      };
      const double L = 6.0;
      const Complex oracle = integrate_gk(integrand, -rc.R - L, rc.R + L, rc.quad_tol);
      worst = std::max(worst,
                       std::abs(b_E_entry(a, PropagatedAtom{b, b.x, b.xi}) - oracle));
    }
    sheet.row("gram_entry_vs_quadrature", worst, 1e-8, worst < 1e-8);
  }

  // Schur row sums of the assembled operators at t = 0.
  {
    const std::vector<PropagatedAtom> cols =
        propagate_atoms(field, frame, 0.0, 0.0, RayBranch::Plus, rc.ray_tol,
                        rc.ray_sign);
    const SparseOperator be = assemble(OperatorKind::E, frame, cols, 0.0,
                                       rc.prune_threshold, 50'000'000, fl.threads);
    const SparseOperator bt = assemble(OperatorKind::T, frame, cols, 0.0,
                                       rc.prune_threshold, 50'000'000, fl.threads);
    const std::vector<double> se = schur_row_sums_by_level(be, frame);
    const std::vector<double> st = schur_row_sums_by_level(bt, frame);
    std::ofstream schur(out_path(rc, "schur.csv"));
    schur << "k,row_sum_E,row_sum_T_scaled\n";
    double emax = 0.0, tmax = 0.0;
    for (size_t k = 0; k < se.size(); ++k) {
      schur << k << "," << se[k] << "," << st[k] << "\n";
      emax = std::max(emax, se[k]);
      tmax = std::max(tmax, st[k]);
    }
    sheet.row("schur_E_max_row_sum", emax, 0.0, std::isfinite(emax));
    sheet.row("schur_T_scaled_max_row_sum", tmax, 0.0, std::isfinite(tmax));
  }

  return sheet.all_pass ? 0 : 1;
}

int cmd_propagate(const CommonFlags& fl, const std::vector<double>& x0,
                  const std::vector<double>& xi0, double t1,
                  const std::string& branch) {
  const RunConfig rc = load_config(fl);
  const CoefficientField field = field_of(rc);
  if (static_cast<int>(x0.size()) != rc.dim ||
      static_cast<int>(xi0.size()) != rc.dim)
    throw ConfigError("--x0/--xi0 must have 'dim' components");
  PhasePoint start;
  start.x = Eigen::Map<const Vec>(x0.data(), rc.dim);
  start.xi = Eigen::Map<const Vec>(xi0.data(), rc.dim);
  const RayBranch rb = (branch == "minus") ? RayBranch::Minus : RayBranch::Plus;
  const RayPath path = evolve(field, start, 0.0, t1, rb, rc.ray_tol, rc.ray_sign);
  write_ray_csv(out_path(rc, "ray.csv"), path);
  std::cout << "samples=" << path.samples.size()
            << " richardson_error=" << path.richardson_error << "\n";
  return 0;
}

int cmd_assemble(const CommonFlags& fl, const std::string& kind, double t) {
  const RunConfig rc = load_config(fl);
  const CoefficientField field = field_of(rc);
  const FrequencyLattice lattice = build_frequency_lattice(rc.dim, rc.k_max);
  const Frame frame = build_frame(lattice, lattice_config(rc));
  const std::vector<PropagatedAtom> cols = propagate_atoms(
      field, frame, 0.0, t, RayBranch::Plus, rc.ray_tol, rc.ray_sign);
  const OperatorKind ok = (kind == "T") ? OperatorKind::T : OperatorKind::E;
  const SparseOperator op =
      assemble(ok, frame, cols, t, rc.prune_threshold, 50'000'000, fl.threads);
  write_sparse_csv(out_path(rc, "operator_" + kind + ".csv"), frame, op);
  const std::vector<double> sums = schur_row_sums_by_level(op, frame);
  std::ofstream schur(out_path(rc, "schur_" + kind + ".csv"));
  schur << "k,max_row_sum_scaled\n";
  for (size_t k = 0; k < sums.size(); ++k) schur << k << "," << sums[k] << "\n";
  std::cout << "entries=" << op.matrix.nonZeros() << "\n";
  return 0;
}

int cmd_solve(const CommonFlags& fl, const std::string& f_path,
              const std::string& h_path, const std::vector<double>& times,
              double xmax, int grid_points) {
  const RunConfig rc = load_config(fl);
  CauchyProblem problem;
  problem.field = field_of(rc);
  problem.horizon = rc.T;
  if (!f_path.empty()) problem.f = read_mixture_csv(f_path, rc.dim);
  if (!h_path.empty()) problem.h = read_mixture_csv(h_path, rc.dim);

  const FrequencyLattice lattice = build_frequency_lattice(rc.dim, rc.k_max);
  const Frame frame = build_frame(lattice, lattice_config(rc));

  SolverOptions opts;
  opts.t_final = rc.solve_time;
  opts.ray_tol = rc.ray_tol;
  opts.threshold = rc.prune_threshold;
  opts.volterra_tol = rc.volterra_tol;
  opts.threads = fl.threads;
  opts.sign = rc.ray_sign;
  const Solution sol = volterra_solve(problem, frame, opts);

  std::vector<Vec> xs;
  for (int j = 0; j < grid_points; ++j) {
    Vec x = Vec::Zero(rc.dim);
    x(0) = -xmax + 2.0 * xmax * j / (grid_points - 1);
    xs.push_back(x);
  }
  std::vector<double> snapshot_times = times;
  if (snapshot_times.empty()) snapshot_times = {rc.solve_time};
  for (double t : snapshot_times) {
    const GaussianMixture u = synthesize_solution(problem, frame, opts, sol, t);
    std::vector<Complex> vals;
    vals.reserve(xs.size());
    for (const Vec& x : xs) vals.push_back(u.eval(x));
    std::ostringstream name;
    name << "snapshot_t" << t << ".csv";
    write_snapshot_csv(out_path(rc, name.str()), xs, vals);
  }

  std::ofstream rep(out_path(rc, "solve_report.txt"));
  rep << "ray_sign = " << (rc.ray_sign == RaySign::Paper ? "paper" : "standard")
      << "\n";
  rep << "terms_used = " << sol.report.terms_used << "\n";
  rep << "rhs_norm = " << sol.report.rhs_norm << "\n";
  for (size_t i = 0; i < sol.report.term_norms.size(); ++i)
    rep << "term_norm_" << i << " = " << sol.report.term_norms[i] << "\n";

  const double t_res = std::min(rc.solve_time, rc.T - 2e-3);
  std::vector<Vec> res_pts(xs.begin(),
                           xs.begin() + std::min<size_t>(xs.size(), 41));
  const double residual =
      residual_estimate(problem, frame, opts, sol, t_res, res_pts);
  rep << "residual_Tu_minus_F = " << residual << "\n";

  // Exact-solution comparison for the 1-D constant field.
  if (rc.dim == 1 && (rc.field_name == "identity" || rc.field_name == "constant")) {
    const double speed = std::sqrt(problem.field.eval(0.0, Vec::Zero(1))(0, 0));
    const double t = rc.solve_time;
    const GaussianMixture u = synthesize_solution(problem, frame, opts, sol, t);
    double num = 0.0, den = 0.0;
    for (const Vec& x : xs) {
      Vec xl(1), xr(1);
      xl << x(0) - speed * t;
      xr << x(0) + speed * t;
      Complex exact = 0.5 * (problem.f.eval(xl) + problem.f.eval(xr));
      if (!problem.h.terms.empty()) exact = Complex{0, 0};  // only f handled
      const Complex diff = u.eval(x) - exact;
      num += std::norm(diff);
      den += std::norm(exact);
    }
    if (den > 0.0)
      rep << "dalembert_relative_L2_error = " << std::sqrt(num / den) << "\n";
  }
  std::cout << "terms_used=" << sol.report.terms_used
            << " residual=" << residual << "\n";
  return 0;
}

int cmd_report(const CommonFlags& fl) {
  const RunConfig rc = load_config(fl);
  std::ifstream is(out_path(rc, "report.csv"));
  if (!is) throw ConfigError("no report.csv in " + rc.out_dir + "; run verify first");
  std::string line;
  bool all_pass = true;
  bool first = true;
  while (std::getline(is, line)) {
    if (first) {
      first = false;
      continue;
    }
    std::cout << line << "\n";
    if (!line.empty() && line.back() == '0') all_pass = false;
  }
  return all_pass ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gaussian-frame wave parametrix toolkit"};
  app.require_subcommand(1);

  CommonFlags fl;
  std::vector<double> x0{0.0}, xi0{4.0}, times;
  double t1 = 0.5, t_assemble = 0.0, xmax = 6.0;
  int grid_points = 241;
  std::string branch = "plus", kind = "E", f_path, h_path;

  add_common(app.add_subcommand("lattice", "build and dump the frequency lattice"), fl);
  add_common(app.add_subcommand("verify", "run the estimate verification battery"), fl);
  auto* prop = app.add_subcommand("propagate", "integrate one bicharacteristic");
  add_common(prop, fl);
  prop->add_option("--x0", x0, "starting position");
  prop->add_option("--xi0", xi0, "starting frequency");
  prop->add_option("--t1", t1, "final time");
  prop->add_option("--branch", branch, "plus|minus");
  auto* asmb = app.add_subcommand("assemble", "assemble an operator matrix");
  add_common(asmb, fl);
  asmb->add_option("--kind", kind, "E|T");
  asmb->add_option("--t", t_assemble, "propagation time");
  auto* solve = app.add_subcommand("solve", "solve a Cauchy problem");
  add_common(solve, fl);
  solve->add_option("--f", f_path, "position data mixture CSV");
  solve->add_option("--velocity", h_path, "velocity data mixture CSV");
  solve->add_option("--times", times, "snapshot times");
  solve->add_option("--xmax", xmax, "snapshot half-width");
  solve->add_option("--grid-points", grid_points, "snapshot grid size");
  add_common(app.add_subcommand("report", "print the last verification report"), fl);

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand("lattice")) return cmd_lattice(fl);
    if (app.got_subcommand("verify")) return cmd_verify(fl);
    if (app.got_subcommand("propagate")) return cmd_propagate(fl, x0, xi0, t1, branch);
    if (app.got_subcommand("assemble")) return cmd_assemble(fl, kind, t_assemble);
    if (app.got_subcommand("solve"))
      return cmd_solve(fl, f_path, h_path, times, xmax, grid_points);
    if (app.got_subcommand("report")) return cmd_report(fl);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const InvalidConfig& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
