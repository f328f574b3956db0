#pragma once

#include <functional>
#include <string>
#include <vector>

#include "pbe/config.hpp"
#include "pbe/solver.hpp"

namespace pbe {

/// Grid-doubling convergence table.  N[k] is the total particle number
/// mu_0(T) on grids[k]; error[k] = |N[k-1] - N[k]| and
/// eoc[k] = ln(error[k-1]/error[k]) / ln 2, both NaN where undefined
/// (the first rows of the table).
struct EOCReport {
  std::vector<int> grids;
  std::vector<double> N;
  std::vector<double> error;
  std::vector<double> eoc;
  bool converged_below_resolution = false;
  std::string fingerprint;
};

/// Runs the base configuration on a strictly doubling grid sequence with
/// the time step coupled to h (the coarsest grid's stability step scaled by
/// h/h_coarse, capped by each grid's own per-step bound) and tabulates the
/// experimental order of convergence of mu_0(T).  Grids run concurrently.
EOCReport eoc_study(const SimConfig& base, const std::vector<int>& grids);

enum class ReferenceCase { const_coag, linear_frag };

/// Closed-form solutions used as convergence oracles for e^{-x} initial
/// data: constant-kernel pure coagulation and linear-selection binary
/// breakage.
std::function<double(double)> analytic_reference(ReferenceCase c, double t);

/// |time derivative - right hand side| of the continuous equation for the
/// closed form at (t, x), with the integrals quadratured and the time
/// derivative differenced.  Near zero when the closed form is correct.
double reference_residual(ReferenceCase c, double t, double x);

/// max over recorded snapshots of the L1 distance to the reference,
/// evaluated at each snapshot's own time.
double error_vs_reference(const SimulationResult& result, ReferenceCase c);

/// L1-vs-reference errors across a doubling grid sequence, dt coupled to h
/// the same way eoc_study does it.
std::vector<double> reference_convergence(const SimConfig& base,
                                          const std::vector<int>& grids,
                                          ReferenceCase c);

}  // namespace pbe
