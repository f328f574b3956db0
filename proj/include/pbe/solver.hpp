#pragma once

#include <limits>
#include <memory>
#include <vector>

#include "pbe/config.hpp"
#include "pbe/diagnostics.hpp"
#include "pbe/flux_engine.hpp"
#include "pbe/kernels.hpp"
#include "pbe/state.hpp"

namespace pbe {

/// Cell averages of the initial density.  The exponential profile uses the
/// closed-form antiderivative; custom profiles are averaged by per-cell
/// Gauss-Legendre and must be nonnegative.
State project_initial(const InitialCondition& ic,
                      std::shared_ptr<const Mesh> mesh, int quad_order = 5);

/// Positivity-preserving time step
///   dt = theta / (sup_K * sum_k dx_k c_k + eta * sup_S),
/// capped at `cap`; an identically zero denominator (empty system) returns
/// the cap.  Guarantees a nonnegative next state.
double stable_dt(const State& s, const DiscreteKernels& dk, double theta,
                 double cap = std::numeric_limits<double>::infinity());

/// One explicit update c_i += dt/(dx_i x_i) * (-dC_i + dF_i).  A negative
/// output entry aborts: under a stability-compliant dt that can only be an
/// internal flux error, and it is never clamped silently.
State step(const State& s, const FluxPair& fluxes, double dt);

/// Interface flux arrays by the incremental recurrences (see FluxEngine).
std::vector<double> compute_coag_flux(const State& s, const DiscreteKernels& dk);
std::vector<double> compute_frag_flux(const State& s, const DiscreteKernels& dk);
FluxPair compute_fluxes(const State& s, const DiscreteKernels& dk);

struct SimulationResult {
  State final_state;
  MomentSeries series;           // always includes t = 0 and t = T
  std::vector<State> snapshots;  // at the configured output instants
  double leakage = 0.0;          // cumulative sum of dt * coag flux at R
  long steps = 0;
  std::string fingerprint;
};

/// Drives the scheme to the final time.  The last step is shortened to land
/// on T exactly; output instants take the state at the first step boundary
/// past them.  Once per run the flux recurrences are checked against the
/// literal sums on a coarse probe before any stepping happens.
SimulationResult run(const SimConfig& cfg);

}  // namespace pbe
