#include "gausswave/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace gw {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double to_double(const std::string& s, const std::string& where) {
  try {
    size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(where + ": expected a number, got '" + s + "'");
  }
}

int to_int(const std::string& s, const std::string& where) {
  const double v = to_double(s, where);
  const int i = static_cast<int>(v);
  if (v != i) throw ConfigError(where + ": expected an integer, got '" + s + "'");
  return i;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(trim(item));
  return out;
}

void fmt(std::ostream& os, double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v,
                                 std::chars_format::general, 17);
  os.write(buf, res.ptr - buf);
}

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot open output file: " + path);
  return os;
}

} // namespace

void RunConfig::validate() const {
  if (dim != 1 && dim != 2) throw ConfigError("dim must be 1 or 2");
  if (k_max < 1) throw ConfigError("k_max must be >= 1");
  if (epsilon <= 0.0) throw ConfigError("epsilon must be > 0");
  if (C_eps <= 0.0 || C_eps >= 4.0)
    throw ConfigError("C_eps must lie in (0, 4): the spatial steps must "
                      "stay below the frame's critical density");
  if (R <= 0.0) throw ConfigError("R must be > 0");
  if (T <= 0.0) throw ConfigError("T must be > 0");
  if (solve_time <= 0.0 || solve_time > T)
    throw ConfigError("solve_time must lie in (0, T]");
  if (ray_tol <= 0.0 || quad_tol <= 0.0 || volterra_tol <= 0.0 ||
      prune_threshold < 0.0)
    throw ConfigError("tolerances must be positive (prune threshold >= 0)");
}

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
  RunConfig rc;
  std::stringstream ss(text);
  std::string raw;
  int lineno = 0;
  std::string section;
  while (std::getline(ss, raw)) {
    ++lineno;
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    const std::string where = origin + ":" + std::to_string(lineno);
    if (line.front() == '[' && line.back() == ']') {
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(where + ": expected key=value or [section]");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key == "dim") rc.dim = to_int(val, where);
    else if (key == "k_max") rc.k_max = to_int(val, where);
    else if (key == "epsilon") rc.epsilon = to_double(val, where);
    else if (key == "C_eps") rc.C_eps = to_double(val, where);
    else if (key == "R") rc.R = to_double(val, where);
    else if (key == "T") rc.T = to_double(val, where);
    else if (key == "solve_time") rc.solve_time = to_double(val, where);
    else if (key == "field") rc.field_name = val;
    else if (key == "field_params") {
      rc.field_params.clear();
      if (!val.empty())
        for (const std::string& p : split(val, ','))
          rc.field_params.push_back(to_double(p, where));
    } else if (key == "ray_tol") rc.ray_tol = to_double(val, where);
    else if (key == "quad_tol") rc.quad_tol = to_double(val, where);
    else if (key == "prune_threshold") rc.prune_threshold = to_double(val, where);
    else if (key == "volterra_tol") rc.volterra_tol = to_double(val, where);
    else if (key == "out_dir") rc.out_dir = val;
    else if (key == "ray_sign") {
      if (val == "paper") rc.ray_sign = RaySign::Paper;
      else if (val == "standard") rc.ray_sign = RaySign::Standard;
      else throw ConfigError(where + ": ray_sign must be 'paper' or 'standard'");
    } else {
      throw ConfigError(where + ": unknown key '" + key + "'" +
                        (section.empty() ? "" : " in section [" + section + "]"));
    }
  }
  rc.validate();
  return rc;
}

RunConfig parse_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file: " + path);
  std::stringstream buf;
  buf << is.rdbuf();
  return parse_config_text(buf.str(), path);
}

LatticeConfig lattice_config(const RunConfig& rc) {
  LatticeConfig lc;
  lc.epsilon = rc.epsilon;
  lc.C_eps = rc.C_eps;
  lc.R = rc.R;
  lc.k_max = rc.k_max;
  return lc;
}

void write_lattice_csv(const std::string& path, const FrequencyLattice& lattice) {
  std::ofstream os = open_out(path);
  os << "k,i";
  for (int d = 0; d < lattice.dim; ++d) os << ",omega" << d;
  os << "\n";
  for (int k = 0; k <= lattice.k_max; ++k)
    for (int i = 0; i < static_cast<int>(lattice.directions[k].size()); ++i) {
      os << k << "," << i;
      for (int d = 0; d < lattice.dim; ++d) {
        os << ",";
        fmt(os, lattice.directions[k][i](d));
      }
      os << "\n";
    }
}

void write_coeffs_csv(const std::string& path, const Frame& frame,
                      const CVec& values) {
  if (values.size() != frame.size())
    throw IndexMismatch("coefficient vector does not match the frame");
  std::ofstream os = open_out(path);
  os << "k,i";
  for (int d = 0; d < frame.dim(); ++d) os << ",alpha" << d;
  os << ",re,im\n";
  for (int g = 0; g < frame.size(); ++g) {
    const FrameIndex& idx = frame.atoms[g].index;
    os << idx.k << "," << idx.i;
    for (int d = 0; d < frame.dim(); ++d) os << "," << idx.alpha(d);
    os << ",";
    fmt(os, values(g).real());
    os << ",";
    fmt(os, values(g).imag());
    os << "\n";
  }
}

void write_mixture_csv(const std::string& path, const GaussianMixture& f) {
  std::ofstream os = open_out(path);
  const int n = f.terms.empty() ? 1 : static_cast<int>(f.terms[0].center.size());
  os << "re_a,im_a";
  for (int d = 0; d < n; ++d) os << ",y" << d;
  for (int d = 0; d < n; ++d) os << ",eta" << d;
  os << ",w\n";
  for (const GaussianPacket& t : f.terms) {
    fmt(os, t.amplitude.real());
    os << ",";
    fmt(os, t.amplitude.imag());
    for (int d = 0; d < n; ++d) {
      os << ",";
      fmt(os, t.center(d));
    }
    for (int d = 0; d < n; ++d) {
      os << ",";
      fmt(os, t.frequency(d));
    }
    os << ",";
    fmt(os, t.width);
    os << "\n";
  }
}

GaussianMixture read_mixture_csv(const std::string& path, int dim) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open mixture file: " + path);
  GaussianMixture out;
  std::string line;
  int lineno = 0;
  const int expected = 2 + 2 * dim + 1;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (lineno == 1 && t.find("re_a") != std::string::npos) continue;
    const std::vector<std::string> cols = split(t, ',');
    const std::string where = path + ":" + std::to_string(lineno);
    if (static_cast<int>(cols.size()) != expected)
      throw ConfigError(where + ": expected " + std::to_string(expected) +
                        " columns, got " + std::to_string(cols.size()));
    GaussianPacket p;
    p.amplitude = Complex(to_double(cols[0], where), to_double(cols[1], where));
    p.center = Vec(dim);
    p.frequency = Vec(dim);
    for (int d = 0; d < dim; ++d) p.center(d) = to_double(cols[2 + d], where);
    for (int d = 0; d < dim; ++d)
      p.frequency(d) = to_double(cols[2 + dim + d], where);
    p.width = to_double(cols[2 + 2 * dim], where);
    if (p.width <= 0.0) throw ConfigError(where + ": packet width must be > 0");
    out.terms.push_back(std::move(p));
  }
  return out;
}

void write_ray_csv(const std::string& path, const RayPath& path_data) {
  std::ofstream os = open_out(path);
  const int n = path_data.samples.empty()
                    ? 1
                    : static_cast<int>(path_data.samples[0].x.size());
  os << "t";
  for (int d = 0; d < n; ++d) os << ",x" << d;
  for (int d = 0; d < n; ++d) os << ",xi" << d;
  os << "\n";
  for (const PhasePoint& p : path_data.samples) {
    fmt(os, p.t);
    for (int d = 0; d < n; ++d) {
      os << ",";
      fmt(os, p.x(d));
    }
    for (int d = 0; d < n; ++d) {
      os << ",";
      fmt(os, p.xi(d));
    }
    os << "\n";
  }
}

void write_sparse_csv(const std::string& path, const Frame& frame,
                      const SparseOperator& op) {
  std::ofstream os = open_out(path);
  const int n = frame.dim();
  os << "k,i";
  for (int d = 0; d < n; ++d) os << ",alpha" << d;
  os << ",kp,ip";
  for (int d = 0; d < n; ++d) os << ",alphap" << d;
  os << ",re,im\n";
  for (int j = 0; j < op.matrix.outerSize(); ++j)
    for (Eigen::SparseMatrix<Complex>::InnerIterator it(op.matrix, j); it; ++it) {
      const FrameIndex& r = frame.atoms[it.row()].index;
      const FrameIndex& c = frame.atoms[j].index;
      os << r.k << "," << r.i;
      for (int d = 0; d < n; ++d) os << "," << r.alpha(d);
      os << "," << c.k << "," << c.i;
      for (int d = 0; d < n; ++d) os << "," << c.alpha(d);
      os << ",";
      fmt(os, it.value().real());
      os << ",";
      fmt(os, it.value().imag());
      os << "\n";
    }
}

void write_snapshot_csv(const std::string& path, const std::vector<Vec>& xs,
                        const std::vector<Complex>& values) {
  if (xs.size() != values.size())
    throw IndexMismatch("snapshot grid and values differ in length");
  std::ofstream os = open_out(path);
  const int n = xs.empty() ? 1 : static_cast<int>(xs[0].size());
  for (int d = 0; d < n; ++d) os << "x" << d << ",";
  os << "re,im\n";
  for (size_t i = 0; i < xs.size(); ++i) {
    for (int d = 0; d < n; ++d) {
      fmt(os, xs[i](d));
      os << ",";
    }
    fmt(os, values[i].real());
    os << ",";
    fmt(os, values[i].imag());
    os << "\n";
  }
}

} // namespace gw
