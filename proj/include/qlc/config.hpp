#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "qlc/solver.hpp"

namespace qlc {

// Raised for any config parse or validation failure. `key` names the offending
// entry as "section.key" (or "<syntax>" for grammar-level errors).
struct ConfigError : std::runtime_error {
  std::string key;
  ConfigError(std::string k, const std::string& what)
      : std::runtime_error("config error at '" + k + "': " + what), key(std::move(k)) {}
};

enum class InitPreset { constant_taylor_green, winding, perturbed };
enum class OutputFormat { csv, binary };

// Plain-text sectioned key=value run description. Grammar:
//   [section] headers; key = value lines; '#' or ';' starts a comment; blank lines
//   ignored; whitespace around keys and values trimmed. Unknown sections or keys are
//   errors, as is any value violating the constraints below (fail-fast, keyed).
struct RunConfig {
  // [material]  a,b,c > 0; L > 0; L1..L4 finite
  double a = 1.0, b = 1.0, c = 1.0;
  double L1 = 1.0, L2 = 0.2, L3 = 0.1, L4 = 0.3;
  double L = 1e-2;
  // [grid]  dim 2|3; n even >= 8; length > 0 (0 = default 2*pi); scheme spectral|central2
  int dim = 2;
  int n = 32;
  double length = 0.0;
  Scheme grid_scheme = Scheme::spectral;
  // [time]  t_end > 0; dt > 0 or "auto"; scheme imex|rk2|picard; optional picard_tol,
  //         picard_max_iters, renormalize_every
  double t_end = 0.1;
  double dt = 0.0;
  TimeScheme time_scheme = TimeScheme::imex;
  double picard_tol = 1e-9;
  int picard_max_iters = 40;
  int renormalize_every = 1;
  // [init]  preset constant_taylor_green|winding|perturbed; system biaxial|uniaxial;
  //         seed; eps (perturbed), v_amp (constant_taylor_green), k_wind (winding)
  InitPreset preset = InitPreset::perturbed;
  SystemKind system = SystemKind::biaxial;
  std::uint64_t seed = 1;
  double eps = 0.05;
  double v_amp = 0.3;
  int k_wind = 1;
  // [output]  directory; snapshot_every >= 0 (0 = final only); format csv|binary
  std::string directory = "out";
  int snapshot_every = 0;
  OutputFormat format = OutputFormat::csv;
  // [sweep]  L_values = comma-separated positive reals (required inside the section)
  std::vector<double> L_values;
};

RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::string& path);

// Constructors from a validated config.
MaterialConstants config_material(const RunConfig& cfg);
Grid config_grid(const RunConfig& cfg);
SchemeConfig config_scheme(const RunConfig& cfg);
SimState config_initial_state(const RunConfig& cfg);

const char* preset_name(InitPreset p);

}  // namespace qlc
