// Batch front-end: run a single simulation, sweep a grid-doubling
// convergence study, or execute the invariant battery on a config.
//
// Exit codes: 0 success, 1 failed check or solver abort, 2 usage error.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pbe/csv.hpp"
#include "pbe/harness.hpp"
#include "pbe/simd/ops.hpp"
#include "pbe/solver.hpp"
#include "pbe/validate.hpp"

namespace fs = std::filesystem;

namespace {

struct CommonFlags {
  std::string config_path;
  double T = -1.0;
  int cells = -1;
  double theta = -1.0;
  double dt = -1.0;
  std::string out_dir;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("config", f.config_path, "config file")->required();
  cmd->add_option("--T", f.T, "override time.T");
  cmd->add_option("--cells", f.cells, "override mesh.cells");
  cmd->add_option("--theta", f.theta, "override time.theta");
  cmd->add_option("--dt", f.dt, "fixed time step (sets time.dt_mode = fixed)");
  cmd->add_option("--out", f.out_dir, "override output.dir");
}

pbe::SimConfig load_config(const CommonFlags& f) {
  pbe::SimConfig cfg = pbe::parse_config(f.config_path);
  if (f.T >= 0.0) pbe::apply_override(cfg, "time.T", pbe::format_g17(f.T));
  if (f.cells >= 0)
    pbe::apply_override(cfg, "mesh.cells", std::to_string(f.cells));
  if (f.theta >= 0.0)
    pbe::apply_override(cfg, "time.theta", pbe::format_g17(f.theta));
  if (f.dt >= 0.0) {
    pbe::apply_override(cfg, "time.dt", pbe::format_g17(f.dt));
    pbe::apply_override(cfg, "time.dt_mode", "fixed");
  }
  if (!f.out_dir.empty()) pbe::apply_override(cfg, "output.dir", f.out_dir);
  return cfg;
}

// Removes everything this invocation wrote if it aborts partway.
struct OutputSet {
  std::vector<fs::path> written;
  void track(const fs::path& p) { written.push_back(p); }
  void discard() {
    std::error_code ec;
    for (const auto& p : written) fs::remove(p, ec);
  }
};

int cmd_run(const CommonFlags& flags) {
  const pbe::SimConfig cfg = load_config(flags);
  const fs::path dir(cfg.out_dir);
  fs::create_directories(dir);

  OutputSet outputs;
  try {
    const pbe::SimulationResult res = pbe::run(cfg);
    for (const pbe::State& snap : res.snapshots) {
      const fs::path p = dir / pbe::density_filename(snap.t);
      outputs.track(p);
      pbe::write_density_csv(p.string(), snap);
    }
    const fs::path mp = dir / "moments.csv";
    outputs.track(mp);
    pbe::write_moments_csv(mp.string(), res.series);
    std::cout << "steps=" << res.steps
              << " mu0(T)=" << pbe::format_g17(res.series.mu0.back())
              << " mu1(T)=" << pbe::format_g17(res.series.mu1.back())
              << " leakage=" << pbe::format_g17(res.leakage) << "\n"
              << "wrote " << outputs.written.size() << " files to "
              << dir.string() << "\n";
  } catch (...) {
    outputs.discard();
    throw;
  }
  return 0;
}

int cmd_eoc(const CommonFlags& flags, const std::string& grids_text) {
  const pbe::SimConfig cfg = load_config(flags);
  std::vector<int> grids;
  std::stringstream ss(grids_text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) grids.push_back(std::stoi(item));

  const fs::path dir(cfg.out_dir);
  fs::create_directories(dir);
  OutputSet outputs;
  try {
    const pbe::EOCReport rep = pbe::eoc_study(cfg, grids);
    const fs::path cp = dir / "eoc.csv";
    const fs::path jp = dir / "eoc.json";
    outputs.track(cp);
    pbe::write_eoc_csv(cp.string(), rep);
    outputs.track(jp);
    pbe::write_eoc_json(jp.string(), rep);
    std::printf("%8s %22s %12s %8s\n", "cells", "N", "error", "eoc");
    for (std::size_t k = 0; k < rep.grids.size(); ++k) {
      std::printf("%8d %22.15g", rep.grids[k], rep.N[k]);
      if (!std::isnan(rep.error[k]))
        std::printf(" %12.4e", rep.error[k]);
      else
        std::printf(" %12s", "-");
      if (!std::isnan(rep.eoc[k]))
        std::printf(" %8.4f\n", rep.eoc[k]);
      else
        std::printf(" %8s\n", "-");
    }
  } catch (...) {
    outputs.discard();
    throw;
  }
  return 0;
}

int cmd_validate(const CommonFlags& flags) {
  const pbe::SimConfig cfg = load_config(flags);
  const int failures = pbe::run_validation_suite(cfg, std::cout);
  if (failures > 0) {
    std::cout << failures << " check(s) failed\n";
    return 1;
  }
  std::cout << "all checks passed\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite-volume solver for coagulation with multiple "
               "fragmentation on a truncated volume domain"};
  app.require_subcommand(1);
  app.footer(std::string("reduction backend: ") +
             pbe::simd::backend_name(pbe::simd::active_backend()) +
             " (override with PBE_SIMD=scalar|avx2|neon)");

  CommonFlags run_flags, eoc_flags, val_flags;
  std::string grids = "30,60,120,240,480";

  CLI::App* run_cmd = app.add_subcommand("run", "integrate one configuration");
  add_common(run_cmd, run_flags);
  CLI::App* eoc_cmd =
      app.add_subcommand("eoc", "grid-doubling convergence study");
  add_common(eoc_cmd, eoc_flags);
  eoc_cmd->add_option("--grids", grids, "comma-separated doubling cell counts");
  CLI::App* val_cmd =
      app.add_subcommand("validate", "run the invariant battery");
  add_common(val_cmd, val_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (run_cmd->parsed()) return cmd_run(run_flags);
    if (eoc_cmd->parsed()) return cmd_eoc(eoc_flags, grids);
    return cmd_validate(val_flags);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
