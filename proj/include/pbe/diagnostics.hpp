#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "pbe/state.hpp"

namespace pbe {

/// Moments, leakage ledger and densities recorded at the output instants.
/// At every instant the recorded total mass plus the cumulative leakage
/// equals the initial mass up to accumulation roundoff.
struct MomentSeries {
  std::vector<double> t, mu0, mu1, mu2, leakage;
};

/// j-th moment by midpoint quadrature, sum_i x_i^j c_i dx_i.  This is the
/// same quadrature the scheme itself uses, so the discrete conservation
/// identities hold exactly as stated; j = 0 shares its definition with the
/// stability bound.
double moment(const State& s, double j);

/// L1 distance sum_i dx_i |a_i - b_i| between states on the same mesh.
double l1_distance(const State& a, const State& b);

/// L1 distance against a reference density, integrated cell by cell.
double l1_distance(const State& a, const std::function<double(double)>& ref,
                   int quad_order = 8);

/// Averages a state on a refined mesh down to a coarse one; every coarse
/// edge must coincide with a fine edge.
State restrict_to(const State& fine, std::shared_ptr<const Mesh> coarse);

}  // namespace pbe
