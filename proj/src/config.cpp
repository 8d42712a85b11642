#include "acpl/config.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

#include "acpl/error.hpp"

namespace acpl {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Parser {
  std::string name;
  int line = 0;

  [[noreturn]] void die(const std::string& msg) const {
    fail(Err::InvalidConfig, name + ":" + std::to_string(line) + ": " + msg);
  }

  double num(const std::string& key, const std::string& v) const {
    char* end = nullptr;
    double x = std::strtod(v.c_str(), &end);
    if (v.empty() || end != v.c_str() + v.size() || !std::isfinite(x))
      die("value of '" + key + "' is not a number: '" + v + "'");
    return x;
  }

  int64_t integer(const std::string& key, const std::string& v) const {
    char* end = nullptr;
    long long x = std::strtoll(v.c_str(), &end, 10);
    if (v.empty() || end != v.c_str() + v.size())
      die("value of '" + key + "' is not an integer: '" + v + "'");
    return int64_t(x);
  }

  uint64_t uinteger(const std::string& key, const std::string& v) const {
    char* end = nullptr;
    unsigned long long x = std::strtoull(v.c_str(), &end, 10);
    if (v.empty() || end != v.c_str() + v.size())
      die("value of '" + key + "' is not an unsigned integer: '" + v + "'");
    return uint64_t(x);
  }

  bool boolean(const std::string& key, const std::string& v) const {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    die("value of '" + key + "' is not a boolean: '" + v + "'");
  }

  std::vector<double> num_list(const std::string& key, const std::string& v) const {
    std::istringstream in(v);
    std::vector<double> out;
    std::string tok;
    while (in >> tok) out.push_back(num(key, tok));
    if (out.empty()) die("value of '" + key + "' is empty");
    return out;
  }
};

}  // namespace

RunConfig parse_config_text(const std::string& text, const std::string& name) {
  RunConfig c;
  Parser p{name, 0};
  std::string section;
  std::vector<int64_t> dims_given;
  std::vector<double> center_given;

  std::istringstream in(text);
  std::string raw;
  while (std::getline(in, raw)) {
    ++p.line;
    std::string s = raw;
    size_t hash = s.find('#');
    if (hash != std::string::npos) s = s.substr(0, hash);
    s = trim(s);
    if (s.empty()) continue;

    if (s.front() == '[') {
      if (s.back() != ']') p.die("unterminated section header");
      section = trim(s.substr(1, s.size() - 2));
      if (section != "grid" && section != "gamma" && section != "solver" &&
          section != "diagnostics")
        p.die("unknown section [" + section + "]");
      continue;
    }

    size_t eq = s.find('=');
    if (eq == std::string::npos) p.die("expected key = value");
    std::string key = trim(s.substr(0, eq));
    std::string val = trim(s.substr(eq + 1));
    if (key.empty()) p.die("empty key");
    if (section.empty()) p.die("key '" + key + "' appears before any section");

    if (section == "grid") {
      if (key == "n") {
        c.n = int(p.integer(key, val));
      } else if (key == "dims") {
        dims_given.clear();
        for (double x : p.num_list(key, val)) {
          if (x != std::floor(x) || x < 2) p.die("'dims' entries must be integers >= 2");
          dims_given.push_back(int64_t(x));
        }
        if (dims_given.size() > 3) p.die("'dims' takes at most three entries");
      } else if (key == "h") {
        c.h = p.num(key, val);
      } else {
        p.die("unknown key '" + key + "' in [grid]");
      }
    } else if (section == "gamma") {
      if (key == "kind") {
        c.gamma_kind = val;
      } else if (key == "radius") {
        c.radius = p.num(key, val);
      } else if (key == "separation") {
        c.separation = p.num(key, val);
      } else if (key == "center") {
        center_given = p.num_list(key, val);
        if (center_given.size() > 3) p.die("'center' takes at most three entries");
      } else if (key == "path") {
        c.gamma_path = val;
      } else if (key == "auto_offset") {
        c.auto_offset = p.boolean(key, val);
      } else {
        p.die("unknown key '" + key + "' in [gamma]");
      }
    } else if (section == "solver") {
      if (key == "eps") {
        c.solver.eps_schedule = p.num_list(key, val);
      } else if (key == "tau") {
        c.solver.tau = p.num(key, val);
      } else if (key == "tol_r") {
        c.solver.tol_r = p.num(key, val);
      } else if (key == "max_iters") {
        c.solver.max_iters = p.integer(key, val);
      } else if (key == "bc") {
        if (val == "dirichlet_plus_one")
          c.solver.bc = BcMode::DirichletPlusOne;
        else if (val == "natural")
          c.solver.bc = BcMode::Natural;
        else
          p.die("unknown bc '" + val + "'");
      } else if (key == "init") {
        if (val == "seam_profile")
          c.solver.init = InitMode::SeamProfile;
        else if (val == "random")
          c.solver.init = InitMode::Random;
        else if (val == "checkpoint")
          c.solver.init = InitMode::Checkpoint;
        else
          p.die("unknown init '" + val + "'");
      } else if (key == "seed") {
        c.solver.seed = p.uinteger(key, val);
      } else if (key == "cg_tol") {
        c.solver.cg_tol = p.num(key, val);
      } else if (key == "cg_max") {
        c.solver.cg_max = int(p.integer(key, val));
      } else if (key == "init_checkpoint") {
        c.init_checkpoint = val;
      } else {
        p.die("unknown key '" + key + "' in [solver]");
      }
    } else {  // diagnostics
      if (key == "delta") {
        c.delta = p.num(key, val);
      } else if (key == "sublevel_b") {
        c.sublevel_b = p.num(key, val);
      } else if (key == "spectrum_k") {
        c.spectrum_k = int(p.integer(key, val));
      } else {
        p.die("unknown key '" + key + "' in [diagnostics]");
      }
    }
  }

  if (!dims_given.empty()) {
    c.dims = {1, 1, 1};
    for (int a = 0; a < c.n && a < 3; ++a)
      c.dims[size_t(a)] = dims_given[std::min(dims_given.size() - 1, size_t(a))];
  }
  if (!center_given.empty()) {
    c.center = Vec3{};
    if (center_given.size() > 0) c.center.x = center_given[0];
    if (center_given.size() > 1) c.center.y = center_given[1];
    if (center_given.size() > 2) c.center.z = center_given[2];
  }
  c.validate();
  return c;
}

RunConfig parse_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) fail(Err::IoFailure, "cannot open config " + path);
  std::stringstream buf;
  buf << f.rdbuf();
  return parse_config_text(buf.str(), path);
}

void RunConfig::validate() const {
  if (n < 1 || n > 3) fail(Err::InvalidConfig, "n must be 1, 2 or 3");
  for (int a = 0; a < n; ++a)
    if (dims[size_t(a)] < 2) fail(Err::InvalidConfig, "dims must be >= 2 per used axis");
  for (int a = n; a < 3; ++a)
    if (dims[size_t(a)] != 1) fail(Err::InvalidConfig, "unused dims entries must be 1");
  if (!(h > 0)) fail(Err::InvalidConfig, "h must be positive");
  if (gamma_kind != "none" && gamma_kind != "point" && gamma_kind != "circle" &&
      gamma_kind != "two_circles" && gamma_kind != "file")
    fail(Err::InvalidConfig, "unknown gamma kind '" + gamma_kind + "'");
  if (gamma_kind == "point" && n != 2) fail(Err::InvalidConfig, "gamma kind point needs n = 2");
  if ((gamma_kind == "circle" || gamma_kind == "two_circles") && n != 3)
    fail(Err::InvalidConfig, "gamma kind " + gamma_kind + " needs n = 3");
  if (gamma_kind == "file" && gamma_path.empty())
    fail(Err::InvalidConfig, "gamma kind file needs a path");
  if (!(radius > 0)) fail(Err::InvalidConfig, "radius must be positive");
  if (!(separation > 0)) fail(Err::InvalidConfig, "separation must be positive");
  solver.validate();
  if (solver.init == InitMode::Checkpoint && init_checkpoint.empty())
    fail(Err::InvalidConfig, "init = checkpoint needs init_checkpoint");
  if (delta < 0) fail(Err::InvalidConfig, "delta must be >= 0");
  if (!(sublevel_b > 0) || !(sublevel_b < 1))
    fail(Err::InvalidConfig, "sublevel_b must be in (0, 1)");
  if (spectrum_k < 1 || spectrum_k > 20)
    fail(Err::InvalidConfig, "spectrum_k must be in [1, 20]");
}

GridSpec RunConfig::make_grid() const { return centered_grid(n, dims, h); }

BoundaryManifold RunConfig::make_gamma() const {
  BoundaryManifold m;
  m.n = n;
  if (gamma_kind == "point") {
    m = make_point_2d(center.x, center.y);
  } else if (gamma_kind == "circle") {
    m = make_circle_3d(center, radius, Vec3{0, 0, 1});
  } else if (gamma_kind == "two_circles") {
    m = make_circle_3d(Vec3{center.x, center.y, center.z - separation / 2}, radius,
                       Vec3{0, 0, 1});
    append_component(m, make_circle_3d(Vec3{center.x, center.y, center.z + separation / 2},
                                       radius, Vec3{0, 0, 1}));
  } else if (gamma_kind == "file") {
    m = load_boundary(gamma_path);
    if (m.n != n) fail(Err::InvalidConfig, "gamma file dimension differs from the grid");
  }
  if (auto_offset && !m.components.empty()) {
    double c = h / (3.0 * std::sqrt(double(n)));
    m.offset_by(Vec3{c, n >= 2 ? c : 0.0, n >= 3 ? c : 0.0});
  }
  if (!m.components.empty()) {
    m.validate();
    GridSpec g = make_grid();
    Vec3 lo = g.box_min(), hi = g.box_max();
    double side = 0;
    for (int a = 0; a < n; ++a) side = std::max(side, hi[a] - lo[a]);
    double margin = std::max(4 * h, 0.05 * side);
    for (const auto& comp : m.components)
      for (const Vec3& v : comp.verts)
        for (int a = 0; a < n; ++a)
          if (v[a] - lo[a] < margin || hi[a] - v[a] < margin)
            fail(Err::InvalidConfig, "gamma is too close to the box boundary");
  }
  return m;
}

std::string config_to_text(const RunConfig& c) {
  std::ostringstream out;
  out << "[grid]\n";
  out << "n = " << c.n << "\n";
  out << "dims =";
  for (int a = 0; a < c.n; ++a) out << " " << c.dims[size_t(a)];
  out << "\n";
  out << "h = " << fmt(c.h) << "\n\n";

  out << "[gamma]\n";
  out << "kind = " << c.gamma_kind << "\n";
  out << "radius = " << fmt(c.radius) << "\n";
  out << "separation = " << fmt(c.separation) << "\n";
  out << "center =";
  for (int a = 0; a < c.n; ++a) out << " " << fmt(c.center[a]);
  out << "\n";
  if (!c.gamma_path.empty()) out << "path = " << c.gamma_path << "\n";
  out << "auto_offset = " << (c.auto_offset ? "true" : "false") << "\n\n";

  out << "[solver]\n";
  out << "eps =";
  for (double e : c.solver.eps_schedule) out << " " << fmt(e);
  out << "\n";
  out << "tau = " << fmt(c.solver.tau) << "\n";
  out << "tol_r = " << fmt(c.solver.tol_r) << "\n";
  out << "max_iters = " << c.solver.max_iters << "\n";
  out << "bc = " << (c.solver.bc == BcMode::DirichletPlusOne ? "dirichlet_plus_one" : "natural")
      << "\n";
  out << "init = "
      << (c.solver.init == InitMode::SeamProfile
              ? "seam_profile"
              : (c.solver.init == InitMode::Random ? "random" : "checkpoint"))
      << "\n";
  out << "seed = " << c.solver.seed << "\n";
  out << "cg_tol = " << fmt(c.solver.cg_tol) << "\n";
  out << "cg_max = " << c.solver.cg_max << "\n";
  if (!c.init_checkpoint.empty()) out << "init_checkpoint = " << c.init_checkpoint << "\n";
  out << "\n[diagnostics]\n";
  out << "delta = " << fmt(c.delta) << "\n";
  out << "sublevel_b = " << fmt(c.sublevel_b) << "\n";
  out << "spectrum_k = " << c.spectrum_k << "\n";
  return out.str();
}

}  // namespace acpl
