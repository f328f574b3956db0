#include <doctest.h>

#include <cmath>
#include <memory>
#include <random>

#include "oracles.hpp"
#include "pbe/diagnostics.hpp"
#include "pbe/flux_engine.hpp"
#include "pbe/solver.hpp"

using namespace pbe;

namespace {

std::shared_ptr<const Mesh> make(MeshKind kind, double a, double b, int n,
                                 double L = 1e6) {
  return std::make_shared<const Mesh>(build_mesh(kind, a, b, n, 0.0, L));
}

DiscreteKernels kernels_on(const Mesh& mesh, CoagKind coag, bool frag,
                           double alpha, double beta = 1.0) {
  KernelSpec s;
  s.coag = coag;
  s.beta = beta;
  s.fragmentation = frag;
  s.alpha = alpha;
  return discretize_kernels(make_kernel_set(s), mesh);
}

double mixed_gap(double a, double b) {
  return std::fabs(a - b) / std::max({1.0, std::fabs(a), std::fabs(b)});
}

}  // namespace

TEST_CASE("initial projection") {
  auto mesh = make(MeshKind::uniform, 0.0, 4.0, 4);
  const State zero = project_initial(InitialCondition::zero(), mesh);
  for (double v : zero.c) CHECK(v == 0.0);

  const State ex = project_initial(InitialCondition::exponential(), mesh);
  CHECK(ex.c[0] == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-15));

  // number content of the projected profile matches the integral exactly
  auto ref_mesh = make(MeshKind::uniform, 1e-3, 100.0, 30);
  const State proj = project_initial(InitialCondition::exponential(), ref_mesh);
  const double n0 = moment(proj, 0.0);
  const double exact =
      oracle::integrate([](double x) { return std::exp(-x); }, 1e-3, 100.0);
  CHECK(std::fabs(n0 - exact) <= 1e-12 * exact);

  CHECK_THROWS_AS(
      project_initial(InitialCondition::custom([](double x) { return x - 1.0; }),
                      mesh),
      std::invalid_argument);
}

TEST_CASE("fluxes vanish on the zero state") {
  auto mesh = make(MeshKind::uniform, 0.0, 4.0, 4);
  const DiscreteKernels dk = kernels_on(*mesh, CoagKind::sum, true, -0.5);
  State s = project_initial(InitialCondition::zero(), mesh);
  const FluxPair fp = compute_fluxes(s, dk);
  for (double v : fp.coag) CHECK(v == 0.0);
  for (double v : fp.frag) CHECK(v == 0.0);
}

TEST_CASE("constant-kernel fluxes match the literal sums on a 4-cell mesh") {
  auto mesh = make(MeshKind::uniform, 0.0, 4.0, 4);
  const DiscreteKernels dk = kernels_on(*mesh, CoagKind::constant, false, 0.0);
  State s;
  s.mesh = mesh;
  s.c = {1.0, 1.0, 1.0, 1.0};
  const auto flux = compute_coag_flux(s, dk);
  const auto ref = oracle::coag_flux_sum(s, dk);
  for (int m = 0; m <= 4; ++m) CHECK(std::fabs(flux[m] - ref[m]) <= 1e-14);
}

TEST_CASE("single occupied cell reproduces the hand-evaluated flux") {
  auto mesh = make(MeshKind::uniform, 0.0, 4.0, 4);
  const DiscreteKernels dk = kernels_on(*mesh, CoagKind::sum, false, 0.0);
  State s;
  s.mesh = mesh;
  s.c = {1.0, 0.0, 0.0, 0.0};
  const auto flux = compute_coag_flux(s, dk);
  const double x0 = mesh->center(0), dx0 = mesh->width(0);
  CHECK(flux[1] == doctest::Approx(x0 * dk.k_at(0, 0) * dx0 * dx0).epsilon(1e-14));
}

TEST_CASE("top-cell-only fragmentation matches the double sum") {
  auto mesh = make(MeshKind::uniform, 0.0, 3.0, 3);
  const DiscreteKernels dk = kernels_on(*mesh, CoagKind::none, true, -0.5);
  State s;
  s.mesh = mesh;
  s.c = {0.0, 0.0, 2.0};
  const auto flux = compute_frag_flux(s, dk);
  const auto ref = oracle::frag_flux_sum(s, dk);
  for (int m = 0; m <= 3; ++m) CHECK(std::fabs(flux[m] - ref[m]) <= 1e-14);
}

TEST_CASE("fragmentation flux is exactly zero at the right boundary") {
  std::mt19937_64 rng(5);
  auto mesh = make(MeshKind::geometric, 1e-3, 100.0, 24);
  const DiscreteKernels dk = kernels_on(*mesh, CoagKind::none, true, -0.75);
  for (int trial = 0; trial < 50; ++trial) {
    const State s = oracle::random_state(mesh, rng);
    CHECK(compute_frag_flux(s, dk).back() == 0.0);
  }
}

TEST_CASE("stability step bound") {
  auto mesh = make(MeshKind::uniform, 1e-3, 100.0, 10);
  const DiscreteKernels dk = kernels_on(*mesh, CoagKind::sum, true, -0.5);
  State s;
  s.mesh = mesh;
  s.c.assign(10, 0.0);
  s.c[0] = 1.0 / mesh->width(0);  // unit number content

  // sup K = 2R = 200, eta * sup S = 3 * 10; theta = 0.5
  CHECK(stable_dt(s, dk, 0.5) == doctest::Approx(0.5 / 230.0).epsilon(1e-12));
  CHECK(stable_dt(s, dk, 0.5) == doctest::Approx(2.1739e-3).epsilon(1e-4));

  SUBCASE("doubling the density shrinks the step") {
    State s2 = s;
    for (double& v : s2.c) v *= 2.0;
    CHECK(stable_dt(s2, dk, 0.5) < stable_dt(s, dk, 0.5));
  }
  SUBCASE("empty pure-coagulation system returns the cap") {
    const DiscreteKernels pc = kernels_on(*mesh, CoagKind::sum, false, 0.0);
    State empty;
    empty.mesh = mesh;
    empty.c.assign(10, 0.0);
    CHECK(stable_dt(empty, pc, 0.5, 7.5) == doctest::Approx(7.5));
  }
  SUBCASE("theta is validated") {
    CHECK_THROWS_AS(stable_dt(s, dk, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(stable_dt(s, dk, 1.0), std::invalid_argument);
  }
}

TEST_CASE("step with zero fluxes advances time only") {
  auto mesh = make(MeshKind::uniform, 0.0, 4.0, 4);
  State s = project_initial(InitialCondition::exponential(), mesh);
  FluxPair fp;
  fp.coag.assign(5, 0.0);
  fp.frag.assign(5, 0.0);
  fp.coag_inc.assign(4, 0.0);
  fp.frag_inc.assign(4, 0.0);
  const State out = step(s, fp, 0.25);
  CHECK(out.t == doctest::Approx(0.25));
  for (int i = 0; i < 4; ++i) CHECK(out.c[i] == s.c[i]);
}

TEST_CASE("one fragmentation step conserves the discrete mass") {
  auto mesh = make(MeshKind::uniform, 1e-3, 50.0, 64);
  const DiscreteKernels dk = kernels_on(*mesh, CoagKind::none, true, -0.5);
  State s = project_initial(InitialCondition::exponential(), mesh);
  const FluxPair fp = compute_fluxes(s, dk);
  const double dt = stable_dt(s, dk, 0.5);
  const State out = step(s, fp, dt);
  const double before = moment(s, 1.0), after = moment(out, 1.0);
  CHECK(std::fabs(after - before) <= 1e-12 * before);
}

TEST_CASE("one coagulation step moves exactly the leaked mass") {
  auto mesh = make(MeshKind::uniform, 1e-3, 20.0, 32);
  const DiscreteKernels dk = kernels_on(*mesh, CoagKind::product, false, 0.0);
  State s = project_initial(InitialCondition::exponential(), mesh);
  for (double& v : s.c) v *= 3.0;  // push the leakage rate up
  const FluxPair fp = compute_fluxes(s, dk);
  const double dt = stable_dt(s, dk, 0.5);
  const State out = step(s, fp, dt);
  const double drop = moment(s, 1.0) - moment(out, 1.0);
  CHECK(drop == doctest::Approx(dt * fp.coag.back()).epsilon(1e-12));
}

TEST_CASE("a non-compliant step aborts instead of clamping") {
  auto mesh = make(MeshKind::uniform, 1e-3, 20.0, 16);
  const DiscreteKernels dk = kernels_on(*mesh, CoagKind::sum, false, 0.0);
  State s = project_initial(InitialCondition::exponential(), mesh);
  const FluxPair fp = compute_fluxes(s, dk);
  CHECK_THROWS_AS(step(s, fp, 1e3), std::runtime_error);
}

TEST_CASE("recurrence fluxes match the literal sums on small meshes") {
  std::mt19937_64 rng(31);
  std::vector<std::shared_ptr<const Mesh>> meshes;
  for (int n = 2; n <= 9; ++n) {
    meshes.push_back(make(MeshKind::uniform, 0.0, 4.0, n));
    meshes.push_back(make(MeshKind::geometric, 1e-3, 8.0, n));
  }
  for (auto& mesh : meshes) {
    const DiscreteKernels dk = kernels_on(*mesh, CoagKind::sum, true, -0.5);
    for (int trial = 0; trial < 40; ++trial) {
      const State s = oracle::random_state(mesh, rng);
      const FluxPair fp = compute_fluxes(s, dk);
      const auto rc = oracle::coag_flux_sum(s, dk);
      const auto rf = oracle::frag_flux_sum(s, dk);
      for (int m = 0; m <= mesh->n_cells(); ++m) {
        CHECK(mixed_gap(fp.coag[m], rc[m]) <= 1e-13);
        CHECK(mixed_gap(fp.frag[m], rf[m]) <= 1e-13);
      }
    }
  }
}

TEST_CASE("factored and generic engine paths agree") {
  std::mt19937_64 rng(77);
  for (auto& mesh : {make(MeshKind::uniform, 1e-3, 60.0, 72),
                     make(MeshKind::geometric, 1e-3, 60.0, 48)}) {
    for (CoagKind coag : {CoagKind::constant, CoagKind::sum, CoagKind::product}) {
      const DiscreteKernels dk = kernels_on(*mesh, coag, true, -0.5);
      FluxEngine fast(mesh, dk);
      FluxEngine slow(mesh, dk, FluxEngine::Path::generic);
      for (int trial = 0; trial < 10; ++trial) {
        const State s = oracle::random_state(mesh, rng);
        const FluxPair a = fast.compute(s);
        const FluxPair b = slow.compute(s);
        double scale = 1.0;
        for (double v : b.coag) scale = std::max(scale, std::fabs(v));
        for (double v : b.frag) scale = std::max(scale, std::fabs(v));
        for (int m = 0; m <= mesh->n_cells(); ++m) {
          CHECK(std::fabs(a.coag[m] - b.coag[m]) <= 1e-12 * scale);
          CHECK(std::fabs(a.frag[m] - b.frag[m]) <= 1e-12 * scale);
        }
      }
    }
  }
}

TEST_CASE("interface arrays are consistent with the per-cell increments") {
  std::mt19937_64 rng(13);
  auto mesh = make(MeshKind::geometric, 1e-2, 30.0, 40);
  const DiscreteKernels dk = kernels_on(*mesh, CoagKind::sum, true, -0.25);
  const State s = oracle::random_state(mesh, rng);
  const FluxPair fp = compute_fluxes(s, dk);
  double scale = 1.0;
  for (double v : fp.coag) scale = std::max(scale, std::fabs(v));
  for (int i = 0; i < mesh->n_cells(); ++i) {
    CHECK(std::fabs((fp.coag[i] + fp.coag_inc[i]) - fp.coag[i + 1]) <=
          1e-12 * scale);
  }
}

TEST_CASE("run with T = 0 returns the projected initial state") {
  SimConfig cfg;
  cfg.n_cells = 24;
  cfg.T = 0.0;
  cfg.instants = {0.0};
  const SimulationResult res = run(cfg);
  CHECK(res.steps == 0);
  CHECK(res.final_state.t == 0.0);
  auto mesh = res.final_state.mesh;
  const State init = project_initial(InitialCondition::exponential(), mesh);
  for (int i = 0; i < 24; ++i) CHECK(res.final_state.c[i] == init.c[i]);
}

TEST_CASE("runs are deterministic") {
  SimConfig cfg;
  cfg.n_cells = 48;
  cfg.T = 0.5;
  cfg.kernel.coag = CoagKind::sum;
  cfg.kernel.alpha = -0.5;
  cfg.instants = {0.25, 0.5};
  const SimulationResult a = run(cfg);
  const SimulationResult b = run(cfg);
  REQUIRE(a.final_state.c.size() == b.final_state.c.size());
  for (std::size_t i = 0; i < a.final_state.c.size(); ++i)
    CHECK(a.final_state.c[i] == b.final_state.c[i]);
  CHECK(a.leakage == b.leakage);
  CHECK(a.steps == b.steps);
}

TEST_CASE("mass identity holds at every step of a mixed run") {
  SimConfig cfg;
  cfg.n_cells = 60;
  cfg.T = 0.4;
  cfg.kernel.coag = CoagKind::sum;
  cfg.kernel.alpha = -0.5;

  auto mesh = std::make_shared<const Mesh>(build_mesh(cfg));
  const DiscreteKernels dk =
      discretize_kernels(make_kernel_set(cfg.kernel), *mesh);
  State s = project_initial(InitialCondition::exponential(), mesh);
  FluxEngine engine(mesh, dk);
  for (int n = 0; n < 120; ++n) {
    const FluxPair fp = engine.compute(s);
    const double dt = stable_dt(s, dk, 0.5);
    const double before = moment(s, 1.0);
    s = step(s, fp, dt);
    const double after = moment(s, 1.0);
    CHECK(std::fabs(after - (before - dt * fp.coag.back())) <= 1e-12 * before);
    for (double v : s.c) CHECK(v >= 0.0);
  }
}

TEST_CASE("particle number respects the exponential growth bound") {
  SimConfig cfg;
  cfg.n_cells = 80;
  cfg.T = 2.0;
  cfg.kernel.coag = CoagKind::sum;
  cfg.kernel.alpha = -0.5;
  cfg.instants = {0.5, 1.0, 1.5, 2.0};
  const SimulationResult res = run(cfg);
  const SupNorms ns = sup_norms(make_kernel_set(cfg.kernel), cfg.x_min, cfg.R);
  const double norm0 = res.series.mu0.front();
  for (std::size_t k = 0; k < res.series.t.size(); ++k) {
    const double bound = norm0 * std::exp(ns.eta * ns.sup_S * res.series.t[k]);
    CHECK(res.series.mu0[k] <= bound * (1.0 + 1e-12));
  }
}
