#include "qlc/config.hpp"

#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace qlc {
namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

[[noreturn]] void fail(const std::string& key, const std::string& what) {
  throw ConfigError(key, what);
}

double to_double(const std::string& key, const std::string& val) {
  const char* b = val.c_str();
  char* e = nullptr;
  double x = std::strtod(b, &e);
  if (e == b || *e != '\0' || !std::isfinite(x)) fail(key, "expected a finite number, got '" + val + "'");
  return x;
}

double to_positive(const std::string& key, const std::string& val) {
  double x = to_double(key, val);
  if (!(x > 0.0)) fail(key, "must be > 0");
  return x;
}

int to_int(const std::string& key, const std::string& val) {
  double x = to_double(key, val);
  if (x != std::floor(x) || std::fabs(x) > 1e9) fail(key, "expected an integer, got '" + val + "'");
  return static_cast<int>(x);
}

std::uint64_t to_seed(const std::string& key, const std::string& val) {
  if (val.empty() || val.find_first_not_of("0123456789") != std::string::npos)
    fail(key, "expected an unsigned integer, got '" + val + "'");
  errno = 0;
  std::uint64_t x = std::strtoull(val.c_str(), nullptr, 10);
  if (errno != 0) fail(key, "seed out of range");
  return x;
}

std::vector<double> to_positive_list(const std::string& key, const std::string& val) {
  std::vector<double> out;
  std::string item;
  std::istringstream ss(val);
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    out.push_back(to_positive(key, item));
  }
  if (out.empty()) fail(key, "expected a comma-separated list of positive reals");
  return out;
}

struct SectionHandler {
  RunConfig& cfg;

  void material(const std::string& key, const std::string& val) {
    const std::string k = "material." + key;
    if (key == "a") cfg.a = to_positive(k, val);
    else if (key == "b") cfg.b = to_positive(k, val);
    else if (key == "c") cfg.c = to_positive(k, val);
    else if (key == "L1") cfg.L1 = to_double(k, val);
    else if (key == "L2") cfg.L2 = to_double(k, val);
    else if (key == "L3") cfg.L3 = to_double(k, val);
    else if (key == "L4") cfg.L4 = to_double(k, val);
    else if (key == "L") cfg.L = to_positive(k, val);
    else fail(k, "unknown key");
  }

  void grid(const std::string& key, const std::string& val) {
    const std::string k = "grid." + key;
    if (key == "dim") {
      cfg.dim = to_int(k, val);
      if (cfg.dim != 2 && cfg.dim != 3) fail(k, "must be 2 or 3");
    } else if (key == "n") {
      cfg.n = to_int(k, val);
      if (cfg.n < 8 || cfg.n % 2 != 0) fail(k, "must be even and >= 8");
    } else if (key == "length") {
      cfg.length = to_positive(k, val);
    } else if (key == "scheme") {
      if (val == "spectral") cfg.grid_scheme = Scheme::spectral;
      else if (val == "central2") cfg.grid_scheme = Scheme::central2;
      else fail(k, "must be spectral or central2");
    } else {
      fail(k, "unknown key");
    }
  }

  void time(const std::string& key, const std::string& val) {
    const std::string k = "time." + key;
    if (key == "t_end") cfg.t_end = to_positive(k, val);
    else if (key == "dt") cfg.dt = (val == "auto") ? 0.0 : to_positive(k, val);
    else if (key == "scheme") {
      if (val == "imex") cfg.time_scheme = TimeScheme::imex;
      else if (val == "rk2") cfg.time_scheme = TimeScheme::explicit_rk2;
      else if (val == "picard") cfg.time_scheme = TimeScheme::picard;
      else fail(k, "must be imex, rk2, or picard");
    } else if (key == "picard_tol") {
      cfg.picard_tol = to_positive(k, val);
    } else if (key == "picard_max_iters") {
      cfg.picard_max_iters = to_int(k, val);
      if (cfg.picard_max_iters < 1) fail(k, "must be >= 1");
    } else if (key == "renormalize_every") {
      cfg.renormalize_every = to_int(k, val);
      if (cfg.renormalize_every < 0) fail(k, "must be >= 0");
    } else {
      fail(k, "unknown key");
    }
  }

  void init(const std::string& key, const std::string& val) {
    const std::string k = "init." + key;
    if (key == "preset") {
      if (val == "constant_taylor_green") cfg.preset = InitPreset::constant_taylor_green;
      else if (val == "winding") cfg.preset = InitPreset::winding;
      else if (val == "perturbed") cfg.preset = InitPreset::perturbed;
      else fail(k, "must be constant_taylor_green, winding, or perturbed");
    } else if (key == "system") {
      if (val == "biaxial") cfg.system = SystemKind::biaxial;
      else if (val == "uniaxial") cfg.system = SystemKind::uniaxial;
      else fail(k, "must be biaxial or uniaxial");
    } else if (key == "seed") {
      cfg.seed = to_seed(k, val);
    } else if (key == "eps") {
      cfg.eps = to_double(k, val);
      if (cfg.eps < 0.0) fail(k, "must be >= 0");
    } else if (key == "v_amp") {
      cfg.v_amp = to_double(k, val);
    } else if (key == "k_wind") {
      cfg.k_wind = to_int(k, val);
      if (cfg.k_wind < 1) fail(k, "must be >= 1");
    } else {
      fail(k, "unknown key");
    }
  }

  void output(const std::string& key, const std::string& val) {
    const std::string k = "output." + key;
    if (key == "directory") {
      if (val.empty()) fail(k, "must be nonempty");
      cfg.directory = val;
    } else if (key == "snapshot_every") {
      cfg.snapshot_every = to_int(k, val);
      if (cfg.snapshot_every < 0) fail(k, "must be >= 0");
    } else if (key == "format") {
      if (val == "csv") cfg.format = OutputFormat::csv;
      else if (val == "binary") cfg.format = OutputFormat::binary;
      else fail(k, "must be csv or binary");
    } else {
      fail(k, "unknown key");
    }
  }

  void sweep(const std::string& key, const std::string& val) {
    const std::string k = "sweep." + key;
    if (key == "L_values") cfg.L_values = to_positive_list(k, val);
    else fail(k, "unknown key");
  }
};

}  // namespace

RunConfig parse_config_text(const std::string& text) {
  RunConfig cfg;
  SectionHandler handle{cfg};
  std::istringstream in(text);
  std::string line, section;
  bool saw_sweep = false;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail("<syntax>", "line " + std::to_string(lineno) + ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section != "material" && section != "grid" && section != "time" &&
          section != "init" && section != "output" && section != "sweep")
        fail(section, "unknown section");
      if (section == "sweep") saw_sweep = true;
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos)
      fail("<syntax>", "line " + std::to_string(lineno) + ": expected key = value");
    if (section.empty())
      fail("<syntax>", "line " + std::to_string(lineno) + ": key before any [section]");
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (key.empty()) fail("<syntax>", "line " + std::to_string(lineno) + ": empty key");
    if (section == "material") handle.material(key, val);
    else if (section == "grid") handle.grid(key, val);
    else if (section == "time") handle.time(key, val);
    else if (section == "init") handle.init(key, val);
    else if (section == "output") handle.output(key, val);
    else handle.sweep(key, val);
  }
  if (saw_sweep && cfg.L_values.empty()) fail("sweep.L_values", "required inside [sweep]");
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) fail("<file>", "cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config_text(ss.str());
}

MaterialConstants config_material(const RunConfig& cfg) {
  return make_material(cfg.a, cfg.b, cfg.c, cfg.L1, cfg.L2, cfg.L3, cfg.L4, cfg.L);
}

Grid config_grid(const RunConfig& cfg) {
  return cfg.length > 0.0 ? make_grid(cfg.dim, cfg.n, cfg.length, cfg.grid_scheme)
                          : make_grid(cfg.dim, cfg.n, cfg.grid_scheme);
}

SchemeConfig config_scheme(const RunConfig& cfg) {
  SchemeConfig sc;
  sc.dt = cfg.dt;
  sc.scheme = cfg.time_scheme;
  sc.picard_tol = cfg.picard_tol;
  sc.picard_max_iters = cfg.picard_max_iters;
  sc.renormalize_every = cfg.renormalize_every;
  return sc;
}

SimState config_initial_state(const RunConfig& cfg) {
  Grid g = config_grid(cfg);
  MaterialConstants mc = config_material(cfg);
  switch (cfg.preset) {
    case InitPreset::constant_taylor_green:
      return init_constant_taylor_green(g, mc, cfg.system, cfg.v_amp);
    case InitPreset::winding:
      return init_winding(g, mc, cfg.system, cfg.k_wind);
    case InitPreset::perturbed:
    default:
      return init_perturbed(g, mc, cfg.system, cfg.eps, cfg.seed);
  }
}

const char* preset_name(InitPreset p) {
  switch (p) {
    case InitPreset::constant_taylor_green: return "constant_taylor_green";
    case InitPreset::winding: return "winding";
    default: return "perturbed";
  }
}

}  // namespace qlc
