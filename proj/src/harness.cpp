#include "pbe/harness.hpp"

#include <cmath>
#include <future>
#include <stdexcept>

#include "pbe/quadrature.hpp"

namespace pbe {

namespace {

void check_doubling(const std::vector<int>& grids, std::size_t min_count) {
  if (grids.size() < min_count)
    throw std::invalid_argument("grid sequence is too short");
  for (std::size_t k = 0; k < grids.size(); ++k) {
    if (grids[k] < 2) throw std::invalid_argument("grids must have >= 2 cells");
    if (k > 0 && grids[k] != 2 * grids[k - 1])
      throw std::invalid_argument(
          "grid sequence must double at every step (got " +
          std::to_string(grids[k - 1]) + " -> " + std::to_string(grids[k]) +
          ")");
  }
}

// dt/h coupling taken from the coarsest grid's initial stability bound.
double h_coupling(const SimConfig& base, int coarsest) {
  SimConfig c0 = base;
  c0.n_cells = coarsest;
  c0.mesh_ratio = 0.0;
  auto mesh = std::make_shared<const Mesh>(build_mesh(c0));
  const KernelSet ks = make_kernel_set(c0.kernel);
  const DiscreteKernels dk = discretize_kernels(ks, *mesh);
  const State init = project_initial(initial_condition(c0), mesh);
  return stable_dt(init, dk, c0.theta, c0.dt_max) / mesh->h();
}

std::vector<SimulationResult> run_grids(const SimConfig& base,
                                        const std::vector<int>& grids) {
  const double coupling = h_coupling(base, grids.front());
  std::vector<std::future<SimulationResult>> futures;
  futures.reserve(grids.size());
  for (int g : grids) {
    SimConfig cfg = base;
    cfg.n_cells = g;
    cfg.mesh_ratio = 0.0;
    cfg.dt_mode = DtMode::proportional;
    cfg.dt_coupling = coupling;
    futures.push_back(
        std::async(std::launch::async, [cfg]() { return run(cfg); }));
  }
  std::vector<SimulationResult> results;
  results.reserve(grids.size());
  for (auto& f : futures) results.push_back(f.get());
  return results;
}

}  // namespace

EOCReport eoc_study(const SimConfig& base, const std::vector<int>& grids) {
  check_doubling(grids, 3);
  auto results = run_grids(base, grids);

  EOCReport rep;
  rep.grids = grids;
  rep.fingerprint = config_fingerprint(base);
  const double nan = std::nan("");
  for (std::size_t k = 0; k < grids.size(); ++k) {
    rep.N.push_back(results[k].series.mu0.back());
    rep.error.push_back(k >= 1 ? std::fabs(rep.N[k - 1] - rep.N[k]) : nan);
    if (k >= 2) {
      if (rep.error[k] == 0.0 || rep.error[k - 1] == 0.0) {
        // successive totals agree to the last bit: no order to measure
        rep.converged_below_resolution = true;
        rep.eoc.push_back(nan);
      } else {
        rep.eoc.push_back(std::log(rep.error[k - 1] / rep.error[k]) /
                          std::log(2.0));
      }
    } else {
      rep.eoc.push_back(nan);
    }
  }
  return rep;
}

std::function<double(double)> analytic_reference(ReferenceCase c, double t) {
  switch (c) {
    case ReferenceCase::const_coag:
      return [t](double x) {
        const double s = t + 2.0;
        return 4.0 / (s * s) * std::exp(-2.0 * x / s);
      };
    case ReferenceCase::linear_frag:
      return [t](double x) {
        const double s = 1.0 + t;
        return s * s * std::exp(-x * s);
      };
  }
  throw std::invalid_argument("unsupported reference case");
}

double reference_residual(ReferenceCase c, double t, double x) {
  const double dt = 1e-5;
  const double dcdt = (analytic_reference(c, t + dt)(x) -
                       analytic_reference(c, t - dt)(x)) /
                      (2.0 * dt);
  const auto ct = analytic_reference(c, t);
  double rhs = 0.0;
  if (c == ReferenceCase::const_coag) {
    // 1/2 int_0^x c(y)c(x-y) dy - c(x) int_0^inf c(y) dy, K = 1
    const double birth =
        0.5 * quad::adaptive([&](double y) { return ct(y) * ct(x - y); }, 0.0,
                             x, 1e-13);
    const double s = t + 2.0;
    const double cutoff = 40.0 * s;
    double number = quad::adaptive(ct, 0.0, cutoff, 1e-13);
    number += 0.5 * s * ct(cutoff);  // exponential tail of the closed form
    rhs = birth - ct(x) * number;
  } else {
    // int_x^inf B(x,y) S(y) c(y) dy - S(x)c(x), B = 2/y, S = y
    const double s = 1.0 + t;
    const double cutoff = x + 60.0 / s;
    double birth =
        2.0 * quad::adaptive([&](double y) { return ct(y); }, x, cutoff, 1e-13);
    birth += 2.0 * ct(cutoff) / s;  // exponential tail
    rhs = birth - x * ct(x);
  }
  return std::fabs(dcdt - rhs);
}

double error_vs_reference(const SimulationResult& result, ReferenceCase c) {
  if (result.snapshots.empty())
    throw std::invalid_argument("result has no recorded snapshots");
  double worst = 0.0;
  for (const State& snap : result.snapshots) {
    const double err = l1_distance(snap, analytic_reference(c, snap.t));
    worst = std::max(worst, err);
  }
  return worst;
}

std::vector<double> reference_convergence(const SimConfig& base,
                                          const std::vector<int>& grids,
                                          ReferenceCase c) {
  check_doubling(grids, 2);
  auto results = run_grids(base, grids);
  std::vector<double> errors;
  errors.reserve(results.size());
  for (const auto& r : results) errors.push_back(error_vs_reference(r, c));
  return errors;
}

}  // namespace pbe
