#include "pbe/validate.hpp"

#include <cmath>
#include <functional>
#include <ostream>
#include <random>
#include <sstream>

#include "pbe/harness.hpp"
#include "pbe/quadrature.hpp"
#include "pbe/solver.hpp"

namespace pbe {

namespace {

struct Reporter {
  std::ostream& out;
  int failures = 0;
  void check(const std::string& name, bool pass, const std::string& detail) {
    out << (pass ? "[PASS] " : "[FAIL] ") << name;
    if (!detail.empty()) out << " (" << detail << ")";
    out << "\n";
    if (!pass) ++failures;
  }
  void skip(const std::string& name, const std::string& why) {
    out << "[SKIP] " << name << " (" << why << ")\n";
  }
};

std::string num(double v) {
  std::ostringstream ss;
  ss.precision(3);
  ss << std::scientific << v;
  return ss.str();
}

SimConfig probe_config(const SimConfig& cfg) {
  SimConfig p = cfg;
  p.T = std::min(cfg.T, 2.0);
  p.n_cells = std::min(cfg.n_cells, 240);
  p.mesh_ratio = 0.0;
  p.dt_mode = DtMode::adaptive;
  p.instants = {p.T};
  return p;
}

void check_mesh(Reporter& rep, const SimConfig& cfg) {
  auto mesh = build_mesh(cfg);
  double sumw = 0.0;
  for (double w : mesh.widths()) sumw += w;
  const double span = cfg.R - cfg.x_min;
  bool ok = std::fabs(sumw - span) <= 1e-12 * span;

  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200 && ok; ++trial) {
    const double x = cfg.x_min + u(rng) * span;
    if (!(x > cfg.x_min)) continue;
    const int cell = mesh.locate(x);
    ok = mesh.edge(cell) < x && x <= mesh.edge(cell + 1);
  }
  for (int i = 0; i < mesh.n_cells() && ok; ++i) {
    for (int j = 0; j <= i; ++j) {
      const auto g = mesh.gamma_index(i, j);
      const double d = mesh.edge(i + 1) - mesh.center(j);
      if (!g) {
        ok = d <= mesh.x_min();
        continue;
      }
      ok = mesh.edge(*g) < d && d <= mesh.edge(*g + 1);
      if (!ok) break;
    }
  }
  rep.check("mesh geometry (widths, cell lookup, interface index)", ok,
            "sum dx vs span gap " + num(std::fabs(sumw - span)));
}

void check_breakage_identities(Reporter& rep, const SimConfig& cfg) {
  if (!cfg.kernel.fragmentation) {
    rep.skip("breakage integral identities", "fragmentation disabled");
    return;
  }
  const KernelSet ks = make_kernel_set(cfg.kernel);
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst_mass = 0.0, worst_count = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const double y = cfg.x_min + (cfg.R - cfg.x_min) * (0.05 + 0.95 * u(rng));
    const double mass =
        quad::left_singular([&](double x) { return x * ks.breakage(x, y); }, y);
    const double count =
        quad::left_singular([&](double x) { return ks.breakage(x, y); }, y);
    worst_mass = std::max(worst_mass, std::fabs(mass - y) / y);
    worst_count = std::max(worst_count, std::fabs(count - ks.eta()) / ks.eta());
  }
  rep.check("breakage conserves parent mass", worst_mass <= 1e-10,
            "worst relative gap " + num(worst_mass));
  rep.check("breakage daughter count matches eta", worst_count <= 1e-10,
            "worst relative gap " + num(worst_count));
}

void check_flux_recurrence(Reporter& rep, const SimConfig& cfg) {
  SimConfig p = cfg;
  p.n_cells = std::min(cfg.n_cells, 24);
  p.mesh_ratio = 0.0;
  auto mesh = std::make_shared<const Mesh>(build_mesh(p));
  const KernelSet ks = make_kernel_set(p.kernel);
  const DiscreteKernels dk = discretize_kernels(ks, *mesh);

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;  // gap normalized by the state's flux scale
  for (int trial = 0; trial < 25; ++trial) {
    State s;
    s.mesh = mesh;
    s.c.resize(mesh->n_cells());
    for (auto& v : s.c) v = (u(rng) < 0.2) ? 0.0 : u(rng);
    FluxEngine engine(mesh, dk);
    const FluxPair fp = engine.compute(s);
    const auto dc = direct_coag_flux(s, dk);
    const auto df = direct_frag_flux(s, dk);
    double scale = 1.0;
    for (int m = 0; m <= mesh->n_cells(); ++m)
      scale = std::max({scale, std::fabs(dc[m]), std::fabs(df[m])});
    for (int m = 0; m <= mesh->n_cells(); ++m) {
      worst = std::max(worst, std::fabs(fp.coag[m] - dc[m]) / scale);
      worst = std::max(worst, std::fabs(fp.frag[m] - df[m]) / scale);
    }
  }
  rep.check("flux recurrences match the literal sums", worst <= 1e-12,
            "worst scale-relative gap " + num(worst));
}

void check_run_invariants(Reporter& rep, const SimConfig& cfg) {
  SimConfig p = probe_config(cfg);
  const int rows = 8;
  p.instants.clear();
  for (int k = 1; k <= rows; ++k) p.instants.push_back(p.T * k / rows);
  SimulationResult res;
  try {
    res = run(p);
  } catch (const std::exception& e) {
    rep.check("short run keeps densities nonnegative", false, e.what());
    return;
  }
  rep.check("short run keeps densities nonnegative", true,
            std::to_string(res.steps) + " steps");

  double worst_ledger = 0.0;
  const double mu1_0 = res.series.mu1.front();
  for (std::size_t k = 0; k < res.series.t.size(); ++k) {
    const double gap =
        std::fabs(res.series.mu1[k] + res.series.leakage[k] - mu1_0) / mu1_0;
    worst_ledger = std::max(worst_ledger, gap);
  }
  rep.check("mass plus cumulative leakage stays constant",
            worst_ledger <= 1e-10, "worst relative gap " + num(worst_ledger));

  if (p.kernel.fragmentation) {
    const KernelSet ks = make_kernel_set(p.kernel);
    const SupNorms s = sup_norms(ks, p.x_min, p.R);
    bool ok = true;
    const double norm0 = res.series.mu0.front();
    for (std::size_t k = 0; k < res.series.t.size(); ++k) {
      const double bound =
          norm0 * std::exp(s.eta * s.sup_S * res.series.t[k]);
      ok = ok && res.series.mu0[k] <= bound * (1.0 + 1e-12);
    }
    rep.check("particle number respects the growth bound", ok, "");
  }

  if (p.kernel.fragmentation) {
    SimConfig frag_only = p;
    frag_only.kernel.coag = CoagKind::none;
    const SimulationResult r2 = run(frag_only);
    const double gap = std::fabs(r2.series.mu1.back() -
                                 r2.series.mu1.front()) /
                       r2.series.mu1.front();
    rep.check("pure fragmentation conserves mass", gap <= 1e-10,
              "relative drift " + num(gap));
  } else {
    rep.skip("pure fragmentation conserves mass", "fragmentation disabled");
  }
}

void check_reference_residuals(Reporter& rep) {
  double worst = 0.0;
  for (double t : {0.0, 0.5, 1.0, 2.0})
    for (double x : {0.1, 0.7, 1.5, 4.0, 9.0}) {
      worst = std::max(worst,
                       reference_residual(ReferenceCase::const_coag, t, x));
      worst = std::max(worst,
                       reference_residual(ReferenceCase::linear_frag, t, x));
    }
  rep.check("analytic reference solutions satisfy the equation",
            worst <= 1e-8, "worst residual " + num(worst));
}

}  // namespace

int run_validation_suite(const SimConfig& cfg, std::ostream& out) {
  validate_config(cfg);
  Reporter rep{out};
  check_mesh(rep, cfg);
  check_breakage_identities(rep, cfg);
  check_flux_recurrence(rep, cfg);
  check_run_invariants(rep, cfg);
  check_reference_residuals(rep);
  return rep.failures;
}

}  // namespace pbe
