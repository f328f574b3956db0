#include "pbe/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace pbe {

namespace {

void fail(const std::string& msg) { throw std::invalid_argument(msg); }

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

double parse_double(const std::string& key, const std::string& v) {
  if (v == "inf") return std::numeric_limits<double>::infinity();
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (end == v.c_str() || *end != '\0')
    fail(key + ": expected a number, got '" + v + "'");
  return x;
}

long parse_long(const std::string& key, const std::string& v) {
  char* end = nullptr;
  const long x = std::strtol(v.c_str(), &end, 10);
  if (end == v.c_str() || *end != '\0')
    fail(key + ": expected an integer, got '" + v + "'");
  return x;
}

std::vector<double> parse_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(parse_double(key, item));
  }
  return out;
}

std::string fmt(double v) {
  if (std::isinf(v)) return "inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void set_key(SimConfig& c, const std::string& key, const std::string& value) {
  if (key == "domain.x_min") {
    c.x_min = parse_double(key, value);
  } else if (key == "domain.R") {
    c.R = parse_double(key, value);
  } else if (key == "mesh.kind") {
    if (value == "uniform")
      c.mesh_kind = MeshKind::uniform;
    else if (value == "geometric")
      c.mesh_kind = MeshKind::geometric;
    else
      fail("mesh.kind: expected uniform|geometric, got '" + value + "'");
  } else if (key == "mesh.cells") {
    c.n_cells = static_cast<int>(parse_long(key, value));
  } else if (key == "mesh.ratio") {
    c.mesh_ratio = parse_double(key, value);
  } else if (key == "mesh.L") {
    c.mesh_L = parse_double(key, value);
  } else if (key == "kernel.coag") {
    if (value == "none")
      c.kernel.coag = CoagKind::none;
    else if (value == "constant")
      c.kernel.coag = CoagKind::constant;
    else if (value == "sum")
      c.kernel.coag = CoagKind::sum;
    else if (value == "product")
      c.kernel.coag = CoagKind::product;
    else
      fail("kernel.coag: expected none|constant|sum|product, got '" + value +
           "'");
  } else if (key == "kernel.beta") {
    c.kernel.beta = parse_double(key, value);
  } else if (key == "kernel.frag") {
    if (value == "on")
      c.kernel.fragmentation = true;
    else if (value == "off")
      c.kernel.fragmentation = false;
    else
      fail("kernel.frag: expected on|off, got '" + value + "'");
  } else if (key == "kernel.alpha") {
    c.kernel.alpha = parse_double(key, value);
  } else if (key == "kernel.selection_exponent") {
    c.kernel.selection_exponent = parse_double(key, value);
  } else if (key == "init.kind") {
    if (value == "exp")
      c.init = InitKind::exp;
    else if (value == "zero")
      c.init = InitKind::zero;
    else if (value == "table")
      c.init = InitKind::table;
    else
      fail("init.kind: expected exp|zero|table, got '" + value + "'");
  } else if (key == "init.table") {
    c.init_table = value;
  } else if (key == "time.T") {
    c.T = parse_double(key, value);
  } else if (key == "time.theta") {
    c.theta = parse_double(key, value);
  } else if (key == "time.dt_mode") {
    if (value == "adaptive")
      c.dt_mode = DtMode::adaptive;
    else if (value == "fixed")
      c.dt_mode = DtMode::fixed;
    else if (value == "proportional")
      c.dt_mode = DtMode::proportional;
    else
      fail("time.dt_mode: expected adaptive|fixed|proportional, got '" +
           value + "'");
  } else if (key == "time.dt") {
    c.dt_value = parse_double(key, value);
  } else if (key == "time.dt_coupling") {
    c.dt_coupling = parse_double(key, value);
  } else if (key == "time.dt_max") {
    c.dt_max = parse_double(key, value);
  } else if (key == "time.step_ceiling") {
    c.step_ceiling = parse_long(key, value);
  } else if (key == "output.instants") {
    c.instants = parse_list(key, value);
  } else if (key == "output.dir") {
    c.out_dir = value;
  } else {
    fail("unknown config key '" + key + "'");
  }
}

}  // namespace

SimConfig parse_config_text(const std::string& text,
                            const std::string& origin) {
  SimConfig cfg;
  std::map<std::string, bool> seen;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      fail(origin + ":" + std::to_string(lineno) +
           ": expected key = value, got '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      fail(origin + ":" + std::to_string(lineno) + ": empty key or value");
    if (seen.count(key))
      fail(origin + ":" + std::to_string(lineno) + ": duplicate key '" + key +
           "'");
    seen[key] = true;
    set_key(cfg, key, value);
  }
  validate_config(cfg);
  return cfg;
}

SimConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path);
}

void apply_override(SimConfig& cfg, const std::string& key,
                    const std::string& value) {
  set_key(cfg, key, value);
  validate_config(cfg);
}

void validate_config(const SimConfig& cfg) {
  if (!(cfg.x_min >= 0.0) || !std::isfinite(cfg.x_min))
    fail("domain.x_min: must be finite and >= 0, got " + fmt(cfg.x_min));
  if (!(cfg.R > cfg.x_min) || !std::isfinite(cfg.R))
    fail("domain.R: must be finite and exceed domain.x_min, got " +
         fmt(cfg.R));
  if (cfg.n_cells < 2) fail("mesh.cells: must be >= 2");
  if (cfg.mesh_L < 1.0) fail("mesh.L: must be >= 1");
  if (cfg.mesh_kind == MeshKind::geometric && !(cfg.x_min > 0.0))
    fail("mesh.kind: geometric mesh requires domain.x_min > 0");
  if (cfg.kernel.coag == CoagKind::none && !cfg.kernel.fragmentation)
    fail("kernel.coag/kernel.frag: at least one process must be enabled");
  if (cfg.kernel.fragmentation) {
    if (!(cfg.kernel.alpha > -1.0 && cfg.kernel.alpha <= 0.0))
      fail("kernel.alpha: must lie in (-1, 0], got " + fmt(cfg.kernel.alpha));
    if (cfg.kernel.selection_exponent &&
        !std::isfinite(*cfg.kernel.selection_exponent))
      fail("kernel.selection_exponent: must be finite");
  }
  if (cfg.kernel.beta < 0.0 || !std::isfinite(cfg.kernel.beta))
    fail("kernel.beta: must be finite and >= 0, got " + fmt(cfg.kernel.beta));
  if (cfg.init == InitKind::table && cfg.init_table.empty())
    fail("init.table: required when init.kind = table");
  if (!(cfg.T >= 0.0) || !std::isfinite(cfg.T))
    fail("time.T: must be finite and >= 0, got " + fmt(cfg.T));
  if (!(cfg.theta > 0.0 && cfg.theta < 1.0))
    fail("time.theta: must lie in (0, 1), got " + fmt(cfg.theta));
  if (cfg.dt_mode == DtMode::fixed && !(cfg.dt_value > 0.0))
    fail("time.dt: fixed mode requires a positive time step");
  if (!(cfg.dt_max > 0.0)) fail("time.dt_max: must be positive");
  if (cfg.step_ceiling < 1) fail("time.step_ceiling: must be >= 1");
  for (double inst : cfg.instants)
    if (!(inst >= 0.0) || inst > cfg.T)
      fail("output.instants: every instant must lie in [0, T], got " +
           fmt(inst));
  if (!std::is_sorted(cfg.instants.begin(), cfg.instants.end()))
    fail("output.instants: must be ascending");
}

std::string canonical_text(const SimConfig& c) {
  std::ostringstream out;
  out << "domain.x_min = " << fmt(c.x_min) << "\n";
  out << "domain.R = " << fmt(c.R) << "\n";
  out << "mesh.kind = "
      << (c.mesh_kind == MeshKind::uniform ? "uniform" : "geometric") << "\n";
  out << "mesh.cells = " << c.n_cells << "\n";
  if (c.mesh_ratio > 0.0) out << "mesh.ratio = " << fmt(c.mesh_ratio) << "\n";
  out << "mesh.L = " << fmt(c.mesh_L) << "\n";
  const char* coag = "none";
  switch (c.kernel.coag) {
    case CoagKind::constant: coag = "constant"; break;
    case CoagKind::sum: coag = "sum"; break;
    case CoagKind::product: coag = "product"; break;
    case CoagKind::custom: coag = "custom"; break;
    default: break;
  }
  out << "kernel.coag = " << coag << "\n";
  out << "kernel.beta = " << fmt(c.kernel.beta) << "\n";
  out << "kernel.frag = " << (c.kernel.fragmentation ? "on" : "off") << "\n";
  out << "kernel.alpha = " << fmt(c.kernel.alpha) << "\n";
  if (c.kernel.selection_exponent)
    out << "kernel.selection_exponent = " << fmt(*c.kernel.selection_exponent)
        << "\n";
  const char* init = c.init == InitKind::exp
                         ? "exp"
                         : (c.init == InitKind::zero ? "zero" : "table");
  out << "init.kind = " << init << "\n";
  if (!c.init_table.empty()) out << "init.table = " << c.init_table << "\n";
  out << "time.T = " << fmt(c.T) << "\n";
  out << "time.theta = " << fmt(c.theta) << "\n";
  const char* mode = c.dt_mode == DtMode::adaptive
                         ? "adaptive"
                         : (c.dt_mode == DtMode::fixed ? "fixed"
                                                       : "proportional");
  out << "time.dt_mode = " << mode << "\n";
  if (c.dt_mode == DtMode::fixed) out << "time.dt = " << fmt(c.dt_value) << "\n";
  if (c.dt_coupling > 0.0)
    out << "time.dt_coupling = " << fmt(c.dt_coupling) << "\n";
  if (std::isfinite(c.dt_max)) out << "time.dt_max = " << fmt(c.dt_max) << "\n";
  out << "time.step_ceiling = " << c.step_ceiling << "\n";
  if (!c.instants.empty()) {
    out << "output.instants = ";
    for (std::size_t i = 0; i < c.instants.size(); ++i)
      out << (i ? "," : "") << fmt(c.instants[i]);
    out << "\n";
  }
  out << "output.dir = " << c.out_dir << "\n";
  return out.str();
}

std::string config_fingerprint(const SimConfig& cfg) {
  const std::string text = canonical_text(cfg);
  unsigned long long h = 1469598103934665603ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", h);
  return buf;
}

InitialCondition initial_condition(const SimConfig& cfg) {
  switch (cfg.init) {
    case InitKind::exp:
      return InitialCondition::exponential();
    case InitKind::zero:
      return InitialCondition::zero();
    default: {
      std::ifstream in(cfg.init_table);
      if (!in) fail("cannot open init.table file '" + cfg.init_table + "'");
      std::vector<double> xs, vs;
      double x, v;
      while (in >> x >> v) {
        if (!xs.empty() && x <= xs.back())
          fail("init.table: abscissae must be strictly increasing");
        if (v < 0.0) fail("init.table: negative density value");
        xs.push_back(x);
        vs.push_back(v);
      }
      if (xs.size() < 2) fail("init.table: needs at least two rows");
      auto fn = [xs, vs](double q) {
        if (q <= xs.front()) return vs.front();
        if (q >= xs.back()) return vs.back();
        const auto it = std::upper_bound(xs.begin(), xs.end(), q);
        const std::size_t k = it - xs.begin();
        const double t = (q - xs[k - 1]) / (xs[k] - xs[k - 1]);
        return vs[k - 1] + t * (vs[k] - vs[k - 1]);
      };
      return InitialCondition::custom(fn);
    }
  }
}

Mesh build_mesh(const SimConfig& cfg) {
  return build_mesh(cfg.mesh_kind, cfg.x_min, cfg.R, cfg.n_cells,
                    cfg.mesh_ratio, cfg.mesh_L);
}

}  // namespace pbe
