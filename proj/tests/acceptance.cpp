// Acceptance suite: one pass/fail line per criterion, exit 1 on any failure.
//
// The heavy convergence-table criteria run last so the invariant checks
// report quickly.  Every tolerance is pinned here, in code.

#include <cmath>
#include <cstdio>
#include <exception>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "pbe/diagnostics.hpp"
#include "pbe/flux_engine.hpp"
#include "pbe/harness.hpp"
#include "pbe/solver.hpp"

using namespace pbe;

namespace {

int g_failures = 0;

void report(int id, const std::string& name, bool pass,
            const std::string& detail) {
  std::printf("[%s] criterion %d: %s", pass ? "PASS" : "FAIL", id,
              name.c_str());
  if (!detail.empty()) std::printf(" (%s)", detail.c_str());
  std::printf("\n");
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string fmt_list(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i)
    out += (i ? ", " : "") + fmt(v[i]);
  return out;
}

SimConfig table_config(double alpha, double selection_exponent) {
  SimConfig cfg;
  cfg.x_min = 1e-3;
  cfg.R = 100.0;
  cfg.mesh_kind = MeshKind::geometric;
  cfg.mesh_L = 1e7;
  cfg.kernel.coag = CoagKind::sum;
  cfg.kernel.fragmentation = true;
  cfg.kernel.alpha = alpha;
  cfg.kernel.selection_exponent = selection_exponent;
  cfg.T = 100.0;
  cfg.theta = 0.5;
  return cfg;
}

// EOC of the finest pair in [0.95, 1.05] and |EOC - 1| nonincreasing
void check_eoc_table(int id, const std::string& name, const EOCReport& rep) {
  std::vector<double> eocs;
  for (double e : rep.eoc)
    if (!std::isnan(e)) eocs.push_back(e);
  if (eocs.empty()) {
    report(id, name, false, "no measurable orders");
    return;
  }
  const double finest = eocs.back();
  bool monotone = true;
  for (std::size_t k = 1; k < eocs.size(); ++k)
    if (std::fabs(eocs[k] - 1.0) > std::fabs(eocs[k - 1] - 1.0))
      monotone = false;
  const bool in_band = finest >= 0.95 && finest <= 1.05;
  report(id, name, in_band && monotone, "eoc: " + fmt_list(eocs));
}

void criterion_1() {
  SimConfig cfg = table_config(-0.5, 0.5);
  const EOCReport rep = eoc_study(cfg, {30, 60, 120, 240, 480});
  check_eoc_table(1, "order-of-convergence table, alpha = -1/2, S = x^1/2",
                  rep);
}

void criterion_2() {
  SimConfig a = table_config(-0.75, 0.5);
  const EOCReport ra = eoc_study(a, {30, 60, 120, 240, 480});
  std::vector<double> ea;
  for (double e : ra.eoc)
    if (!std::isnan(e)) ea.push_back(e);

  SimConfig b = table_config(-0.75, 0.25);
  const EOCReport rb = eoc_study(b, {30, 60, 120, 240, 480});
  std::vector<double> eb;
  for (double e : rb.eoc)
    if (!std::isnan(e)) eb.push_back(e);

  const bool pass = !ea.empty() && !eb.empty() &&
                    ea.back() >= 0.95 && ea.back() <= 1.05 &&
                    eb.back() >= 0.95 && eb.back() <= 1.05;
  report(2, "order-of-convergence table, alpha = -3/4, S = x^1/2 and x^1/4",
         pass, "finest eoc: " + fmt(ea.empty() ? std::nan("") : ea.back()) +
                   " / " + fmt(eb.empty() ? std::nan("") : eb.back()));
}

void criterion_3() {
  double worst = 0.0;
  for (double alpha : {-0.9, -0.5, 0.0}) {
    SimConfig cfg;
    cfg.n_cells = 240;
    cfg.T = 10.0;
    cfg.kernel.coag = CoagKind::none;
    cfg.kernel.fragmentation = true;
    cfg.kernel.alpha = alpha;
    const SimulationResult res = run(cfg);
    const double drift = std::fabs(res.series.mu1.back() -
                                   res.series.mu1.front()) /
                         res.series.mu1.front();
    worst = std::max(worst, drift);
  }
  report(3, "pure fragmentation conserves mass to 1e-10", worst <= 1e-10,
         "worst relative drift " + fmt(worst));
}

void criterion_4() {
  SimConfig cfg;
  cfg.n_cells = 240;
  cfg.T = 10.0;
  cfg.kernel.coag = CoagKind::sum;
  cfg.kernel.fragmentation = false;
  cfg.instants = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  const SimulationResult res = run(cfg);
  const double mu1_0 = res.series.mu1.front();
  double worst = 0.0;
  for (std::size_t k = 0; k < res.series.t.size(); ++k) {
    const double gap =
        std::fabs(res.series.mu1[k] + res.series.leakage[k] - mu1_0) / mu1_0;
    worst = std::max(worst, gap);
  }
  report(4, "pure coagulation mass ledger closes to 1e-10", worst <= 1e-10,
         "worst relative gap " + fmt(worst) + " over " +
             std::to_string(res.series.t.size()) + " instants");
}

void criterion_5() {
  std::mt19937_64 rng(20240817);
  std::vector<std::shared_ptr<const Mesh>> meshes = {
      std::make_shared<const Mesh>(build_mesh(MeshKind::uniform, 0.0, 4.0, 17)),
      std::make_shared<const Mesh>(
          build_mesh(MeshKind::uniform, 1e-3, 100.0, 33)),
      std::make_shared<const Mesh>(
          build_mesh(MeshKind::geometric, 1e-3, 100.0, 24, 0.0, 1e7)),
      std::make_shared<const Mesh>(
          build_mesh(MeshKind::geometric, 0.05, 10.0, 16, 0.0, 1e4)),
  };
  std::vector<KernelSpec> kernels;
  {
    KernelSpec k;
    k.coag = CoagKind::sum;
    k.alpha = -0.5;
    kernels.push_back(k);
    k.coag = CoagKind::constant;
    k.alpha = 0.0;
    kernels.push_back(k);
    k.coag = CoagKind::product;
    k.alpha = -0.75;
    kernels.push_back(k);
    k.coag = CoagKind::sum;
    k.fragmentation = false;
    kernels.push_back(k);
    k.coag = CoagKind::none;
    k.fragmentation = true;
    k.alpha = -0.9;
    kernels.push_back(k);
  }
  std::vector<std::vector<DiscreteKernels>> dks(meshes.size());
  for (std::size_t m = 0; m < meshes.size(); ++m)
    for (const auto& spec : kernels)
      dks[m].push_back(discretize_kernels(make_kernel_set(spec), *meshes[m]));

  const double thetas[] = {0.3, 0.5, 0.9};
  long negatives = 0;
  int trials = 0;
  for (int trial = 0; trial < 1000; ++trial, ++trials) {
    const std::size_t m = trial % meshes.size();
    const DiscreteKernels& dk = dks[m][trial % kernels.size()];
    State s = oracle::random_state(meshes[m], rng);
    const double theta = thetas[trial % 3];
    try {
      FluxEngine engine(meshes[m], dk);
      for (int sub = 0; sub < 3; ++sub) {
        const FluxPair fp = engine.compute(s);
        const double dt = stable_dt(s, dk, theta, 1.0);
        s = step(s, fp, dt);  // throws on any negative entry
        for (double v : s.c)
          if (v < 0.0) ++negatives;
      }
    } catch (const std::exception&) {
      ++negatives;
    }
  }
  report(5, "positivity under the stability bound", negatives == 0,
         std::to_string(trials) + " randomized states x 3 steps, " +
             std::to_string(negatives) + " negative entries");
}

void criterion_6() {
  SimConfig cfg;
  cfg.x_min = 1e-5;
  cfg.R = 10.0;
  cfg.kernel.coag = CoagKind::none;
  cfg.kernel.fragmentation = true;
  cfg.kernel.alpha = 0.0;  // S(x) = x, binary breakage
  cfg.T = 1.0;
  cfg.instants = {0.5, 1.0};
  const auto errors = reference_convergence(cfg, {480, 960, 1920, 3840},
                                            ReferenceCase::linear_frag);
  std::vector<double> ratios;
  bool pass = true;
  for (std::size_t k = 1; k < errors.size(); ++k) {
    ratios.push_back(errors[k - 1] / errors[k]);
    pass = pass && ratios.back() >= 1.8 && ratios.back() <= 2.2;
  }
  report(6, "fragmentation converges first order against the closed form",
         pass, "ratios per halving: " + fmt_list(ratios));
}

void criterion_7() {
  SimConfig cfg;
  cfg.x_min = 1e-5;
  cfg.R = 50.0;
  cfg.kernel.coag = CoagKind::constant;
  cfg.kernel.beta = 1.0;
  cfg.kernel.fragmentation = false;
  cfg.T = 1.0;
  cfg.instants = {0.5, 1.0};
  const auto errors = reference_convergence(cfg, {120, 240, 480, 960},
                                            ReferenceCase::const_coag);
  std::vector<double> ratios;
  bool pass = true;
  for (std::size_t k = 1; k < errors.size(); ++k) {
    ratios.push_back(errors[k - 1] / errors[k]);
    pass = pass && ratios.back() >= 1.8 && ratios.back() <= 2.2;
  }
  report(7, "coagulation converges first order against the closed form",
         pass, "ratios per halving: " + fmt_list(ratios));
}

void criterion_8() {
  std::mt19937_64 rng(99173);
  double worst = 0.0;
  long states = 0;
  for (int n = 2; n <= 9; ++n) {
    std::vector<std::shared_ptr<const Mesh>> meshes = {
        std::make_shared<const Mesh>(
            build_mesh(MeshKind::uniform, 0.0, 4.0, n)),
        std::make_shared<const Mesh>(
            build_mesh(MeshKind::uniform, 1e-3, 8.0, n)),
        std::make_shared<const Mesh>(
            build_mesh(MeshKind::geometric, 1e-3, 8.0, n, 0.0, 1e5)),
        std::make_shared<const Mesh>(
            build_mesh(MeshKind::geometric, 0.05, 10.0, n, 0.0, 1e3)),
    };
    for (auto& mesh : meshes) {
      KernelSpec spec;
      spec.coag = (n % 2 == 0) ? CoagKind::sum : CoagKind::constant;
      spec.alpha = (n % 2 == 0) ? -0.5 : 0.0;
      const DiscreteKernels dk =
          discretize_kernels(make_kernel_set(spec), *mesh);
      for (int trial = 0; trial < 200; ++trial, ++states) {
        const State s = oracle::random_state(mesh, rng);
        const FluxPair fp = compute_fluxes(s, dk);
        const auto rc = oracle::coag_flux_sum(s, dk);
        const auto rf = oracle::frag_flux_sum(s, dk);
        for (int m = 0; m <= n; ++m) {
          const double gc = std::fabs(fp.coag[m] - rc[m]) /
                            std::max({1.0, std::fabs(fp.coag[m]),
                                      std::fabs(rc[m])});
          const double gf = std::fabs(fp.frag[m] - rf[m]) /
                            std::max({1.0, std::fabs(fp.frag[m]),
                                      std::fabs(rf[m])});
          worst = std::max({worst, gc, gf});
        }
      }
    }
  }
  report(8, "recurrence fluxes match the literal sums to 1e-13",
         worst <= 1e-13,
         std::to_string(states) + " states, worst mixed gap " + fmt(worst));
}

void criterion_9() {
  SimConfig cfg = table_config(-0.5, 0.5);
  cfg.mesh_kind = MeshKind::uniform;
  cfg.mesh_L = Mesh::default_width_ratio_bound;
  cfg.n_cells = 120;
  cfg.T = 5.0;
  cfg.instants = {1, 2, 3, 4, 5};
  const SimulationResult res = run(cfg);
  const double norm_in = oracle::integrate(
      [](double x) { return std::exp(-x); }, cfg.x_min, cfg.R);
  const SupNorms ns = sup_norms(make_kernel_set(cfg.kernel), cfg.x_min, cfg.R);
  bool pass = true;
  double margin = 1e300;
  for (std::size_t k = 0; k < res.series.t.size(); ++k) {
    const double bound =
        norm_in * std::exp(ns.eta * ns.sup_S * res.series.t[k]);
    pass = pass && res.series.mu0[k] <= bound * (1.0 + 1e-12);
    margin = std::min(margin, bound / res.series.mu0[k]);
  }
  report(9, "particle number stays under the exponential growth bound", pass,
         "tightest bound factor " + fmt(margin));
}

}  // namespace

int main() {
  try {
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_8();
    criterion_9();
    criterion_6();
    criterion_7();
    criterion_1();
    criterion_2();
  } catch (const std::exception& e) {
    std::printf("[FAIL] acceptance aborted: %s\n", e.what());
    ++g_failures;
  }
  std::printf("%s: %d criterion failure(s)\n",
              g_failures == 0 ? "ACCEPTANCE PASSED" : "ACCEPTANCE FAILED",
              g_failures);
  return g_failures == 0 ? 0 : 1;
}
