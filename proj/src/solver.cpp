#include "pbe/solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "pbe/quadrature.hpp"

namespace pbe {

namespace {

struct KahanSum {
  double sum = 0.0, carry = 0.0;
  void add(double v) {
    const double y = v - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

double mixed_tol_gap(double a, double b) {
  return std::fabs(a - b) / std::max({1.0, std::fabs(a), std::fabs(b)});
}

// Recurrence-vs-direct-sum check on a coarse probe of the same kind of
// mesh, guarding the gamma bookkeeping before a run commits to hours of
// stepping.
void flux_self_check(const SimConfig& cfg, const KernelSet& ks) {
  SimConfig probe = cfg;
  probe.n_cells = std::min(cfg.n_cells, 48);
  probe.mesh_ratio = 0.0;  // re-derive for the probe cell count
  auto mesh = std::make_shared<const Mesh>(build_mesh(probe));
  const DiscreteKernels dk = discretize_kernels(ks, *mesh);
  const State s = project_initial(initial_condition(probe), mesh);
  FluxEngine engine(mesh, dk);
  const FluxPair fp = engine.compute(s);
  const auto dc = direct_coag_flux(s, dk);
  const auto df = direct_frag_flux(s, dk);
  for (int m = 0; m <= probe.n_cells; ++m) {
    if (mixed_tol_gap(fp.coag[m], dc[m]) > 1e-10 ||
        mixed_tol_gap(fp.frag[m], df[m]) > 1e-10)
      throw std::runtime_error(
          "flux self-check failed at interface " + std::to_string(m) +
          ": recurrence and direct sums disagree");
  }
}

}  // namespace

State project_initial(const InitialCondition& ic,
                      std::shared_ptr<const Mesh> mesh, int quad_order) {
  if (!mesh) throw std::invalid_argument("project_initial requires a mesh");
  const int n = mesh->n_cells();
  State s;
  s.t = 0.0;
  s.c.assign(n, 0.0);
  switch (ic.kind) {
    case InitialCondition::Kind::zero:
      break;
    case InitialCondition::Kind::exponential:
      for (int i = 0; i < n; ++i) {
        const double a = mesh->edge(i), b = mesh->edge(i + 1);
        s.c[i] = (std::exp(-a) - std::exp(-b)) / mesh->width(i);
      }
      break;
    case InitialCondition::Kind::custom: {
      if (!ic.fn)
        throw std::invalid_argument("custom initial condition has no callable");
      for (int i = 0; i < n; ++i) {
        auto guarded = [&](double x) {
          const double v = ic.fn(x);
          if (v < 0.0 || !std::isfinite(v))
            throw std::invalid_argument(
                "initial condition is negative or non-finite at x = " +
                std::to_string(x));
          return v;
        };
        s.c[i] = quad::gl(guarded, mesh->edge(i), mesh->edge(i + 1),
                          quad_order) /
                 mesh->width(i);
        if (s.c[i] < 0.0) s.c[i] = 0.0;
      }
      break;
    }
  }
  s.mesh = std::move(mesh);
  return s;
}

double stable_dt(const State& s, const DiscreteKernels& dk, double theta,
                 double cap) {
  if (!(theta > 0.0 && theta < 1.0))
    throw std::invalid_argument("theta must lie in (0, 1)");
  double denom = 0.0;
  if (dk.has_coag) denom += dk.sup_K * moment(s, 0.0);
  if (dk.has_frag) denom += dk.eta * dk.sup_S;
  if (!(denom > 0.0)) return cap;
  return std::min(theta / denom, cap);
}

State step(const State& s, const FluxPair& fluxes, double dt) {
  const int n = static_cast<int>(s.c.size());
  if (static_cast<int>(fluxes.coag_inc.size()) != n ||
      static_cast<int>(fluxes.frag_inc.size()) != n)
    throw std::invalid_argument("flux arrays do not match the state");
  const Mesh& mesh = *s.mesh;
  State out;
  out.mesh = s.mesh;
  out.t = s.t + dt;
  out.c.resize(n);
  for (int i = 0; i < n; ++i) {
    const double scale = dt / (mesh.width(i) * mesh.center(i));
    const double v =
        s.c[i] + scale * (fluxes.frag_inc[i] - fluxes.coag_inc[i]);
    if (!(v >= 0.0) || !std::isfinite(v))
      throw std::runtime_error(
          "negative or non-finite density at cell " + std::to_string(i) +
          " after a step (c = " + std::to_string(v) + ", t = " +
          std::to_string(out.t) +
          "): time step too large or internal flux error; aborting instead "
          "of clamping");
    out.c[i] = v;
  }
  return out;
}

std::vector<double> compute_coag_flux(const State& s, const DiscreteKernels& dk) {
  FluxEngine engine(s.mesh, dk);
  return engine.compute(s).coag;
}

std::vector<double> compute_frag_flux(const State& s, const DiscreteKernels& dk) {
  FluxEngine engine(s.mesh, dk);
  return engine.compute(s).frag;
}

FluxPair compute_fluxes(const State& s, const DiscreteKernels& dk) {
  FluxEngine engine(s.mesh, dk);
  return engine.compute(s);
}

SimulationResult run(const SimConfig& cfg) {
  validate_config(cfg);
  const KernelSet ks = make_kernel_set(cfg.kernel);
  flux_self_check(cfg, ks);

  auto mesh = std::make_shared<const Mesh>(build_mesh(cfg));
  const DiscreteKernels dk = discretize_kernels(ks, *mesh);
  State s = project_initial(initial_condition(cfg), mesh);
  FluxEngine engine(mesh, dk);

  std::vector<double> instants = cfg.instants;
  if (instants.empty()) instants.push_back(cfg.T);

  SimulationResult res;
  res.fingerprint = config_fingerprint(cfg);
  KahanSum leak;

  auto record_series = [&](const State& st, double leakage) {
    res.series.t.push_back(st.t);
    res.series.mu0.push_back(moment(st, 0.0));
    res.series.mu1.push_back(moment(st, 1.0));
    res.series.mu2.push_back(moment(st, 2.0));
    res.series.leakage.push_back(leakage);
  };

  std::size_t next_instant = 0;
  record_series(s, 0.0);
  while (next_instant < instants.size() && instants[next_instant] <= s.t) {
    res.snapshots.push_back(s);
    ++next_instant;
  }

  double coupling = cfg.dt_coupling;
  if (cfg.dt_mode == DtMode::proportional && !(coupling > 0.0))
    coupling = stable_dt(s, dk, cfg.theta, cfg.dt_max) / mesh->h();

  FluxPair fp;
  while (s.t < cfg.T) {
    if (res.steps >= cfg.step_ceiling)
      throw std::runtime_error("step ceiling of " +
                               std::to_string(cfg.step_ceiling) +
                               " exceeded before reaching T");
    engine.compute(s, fp);
    double dt;
    switch (cfg.dt_mode) {
      case DtMode::adaptive:
        dt = stable_dt(s, dk, cfg.theta, cfg.dt_max);
        break;
      case DtMode::fixed:
        dt = cfg.dt_value;
        break;
      default:
        dt = std::min(coupling * mesh->h(),
                      stable_dt(s, dk, cfg.theta, cfg.dt_max));
        break;
    }
    const bool final_step = (s.t + dt >= cfg.T);
    if (final_step) dt = cfg.T - s.t;
    s = step(s, fp, dt);
    if (final_step) s.t = cfg.T;
    leak.add(dt * fp.coag.back());
    ++res.steps;

    while (next_instant < instants.size() && s.t >= instants[next_instant]) {
      record_series(s, leak.sum);
      res.snapshots.push_back(s);
      ++next_instant;
    }
  }
  if (res.series.t.empty() || res.series.t.back() != cfg.T)
    record_series(s, leak.sum);
  while (next_instant < instants.size()) {
    // instants == T when the run ends exactly there (or T == 0)
    res.snapshots.push_back(s);
    ++next_instant;
  }
  res.leakage = leak.sum;
  res.final_state = std::move(s);
  return res;
}

}  // namespace pbe
