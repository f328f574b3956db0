#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "pbe/mesh.hpp"

namespace pbe {

/// Number densities per cell at one time level.
struct State {
  std::vector<double> c;
  double t = 0.0;
  std::shared_ptr<const Mesh> mesh;
};

/// Interface flux arrays for one time level.  coag[m] and frag[m] hold the
/// value at interface m - 1/2, so both arrays have n_cells + 1 entries with
/// coag[0] = frag[0] = 0 and frag[n_cells] = 0 (conservative fragmentation
/// truncation); coag[n_cells] is the mass-leakage rate through R.
///
/// coag_inc[i] / frag_inc[i] are the per-cell interface differences
/// (value at i+1/2 minus value at i-1/2) exactly as accumulated into the
/// arrays; the explicit update consumes these so that sign structure is
/// preserved in floating point.
struct FluxPair {
  std::vector<double> coag, frag;
  std::vector<double> coag_inc, frag_inc;
};

struct InitialCondition {
  enum class Kind { exponential, zero, custom };
  Kind kind = Kind::exponential;
  std::function<double(double)> fn;  // custom only

  static InitialCondition exponential() { return {Kind::exponential, {}}; }
  static InitialCondition zero() { return {Kind::zero, {}}; }
  static InitialCondition custom(std::function<double(double)> f) {
    return {Kind::custom, std::move(f)};
  }
};

}  // namespace pbe
