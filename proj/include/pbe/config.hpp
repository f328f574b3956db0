#pragma once

#include <limits>
#include <string>
#include <vector>

#include "pbe/kernels.hpp"
#include "pbe/mesh.hpp"
#include "pbe/state.hpp"

namespace pbe {

enum class DtMode { adaptive, fixed, proportional };
enum class InitKind { exp, zero, table };

/// One batch run, fully specified.  Defaults match the reference setup:
/// domain [1e-3, 100], horizon 100, e^{-x} initial data, theta = 0.5.
struct SimConfig {
  double x_min = 1e-3;
  double R = 100.0;

  MeshKind mesh_kind = MeshKind::uniform;
  int n_cells = 30;
  double mesh_ratio = 0.0;  // geometric only; <= 0 derives it from the bounds
  double mesh_L = Mesh::default_width_ratio_bound;

  KernelSpec kernel;

  InitKind init = InitKind::exp;
  std::string init_table;  // path, init == table only

  double T = 100.0;
  double theta = 0.5;
  DtMode dt_mode = DtMode::adaptive;
  double dt_value = 0.0;     // fixed mode
  double dt_coupling = 0.0;  // proportional mode: dt = coupling * h; <= 0 auto
  double dt_max = std::numeric_limits<double>::infinity();
  long step_ceiling = 100000000;

  std::vector<double> instants;  // empty means {T}
  std::string out_dir = ".";
};

/// Parses a flat key/value config file (dotted sections, '#' comments).
/// Unknown or duplicate keys, malformed values and domain violations are
/// hard errors naming the key and the accepted range.
SimConfig parse_config(const std::string& path);
SimConfig parse_config_text(const std::string& text, const std::string& origin);

void validate_config(const SimConfig& cfg);

/// Applies one key=value override on top of a parsed config (CLI flags).
void apply_override(SimConfig& cfg, const std::string& key,
                    const std::string& value);

/// Canonical serialization; parsing it back reproduces an identical config.
std::string canonical_text(const SimConfig& cfg);

/// FNV-1a hash of the canonical text, as 16 hex digits.
std::string config_fingerprint(const SimConfig& cfg);

/// Builds the initial condition described by the config (loads the table
/// file for InitKind::table).
InitialCondition initial_condition(const SimConfig& cfg);

Mesh build_mesh(const SimConfig& cfg);

}  // namespace pbe
