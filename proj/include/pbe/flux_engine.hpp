#pragma once

#include <memory>
#include <vector>

#include "pbe/kernels.hpp"
#include "pbe/state.hpp"

namespace pbe {

/// Evaluates both interface flux arrays by the incremental recurrences:
/// each cell contributes its new-pair sum and the telescoped birth
/// correction, so a full time level costs O(n^2) instead of the O(n^3) of
/// the literal sums.
///
/// Built-in kernel families additionally factor the inner reductions
/// (suffix sums for the loss terms, one reversed dot per interface for the
/// coagulation birth term on uniform meshes); Path::generic forces the
/// unfactored row-dot / gamma-table route so the two can be equivalence
/// tested against each other.
///
/// An engine owns per-step scratch buffers: concurrent compute() calls on
/// one instance are not allowed (a run owns its engine exclusively; build
/// one engine per concurrent run).
class FluxEngine {
 public:
  enum class Path { automatic, generic };

  FluxEngine(std::shared_ptr<const Mesh> mesh, const DiscreteKernels& dk,
             Path path = Path::automatic);

  void compute(const State& s, FluxPair& out);
  FluxPair compute(const State& s);

  bool uniform_shortcut() const { return uniform_fast_; }

 private:
  void compute_coag(const std::vector<double>& c, FluxPair& out);
  void compute_frag(const std::vector<double>& c, FluxPair& out);
  void assemble(const std::vector<double>& inc, std::vector<double>& iface,
                bool zero_right_boundary) const;
  int gamma_tri(int i, int j) const {
    return gamma_tri_[static_cast<std::size_t>(i) * (i + 1) / 2 + j];
  }

  std::shared_ptr<const Mesh> mesh_;
  const DiscreteKernels* dk_;
  int n_ = 0;
  bool generic_ = false;
  bool uniform_fast_ = false;
  bool separable_coag_ = false;

  std::vector<int> gamma_diag_;  // gamma(i,i); -1 when below the domain
  std::vector<int> gamma_tri_;   // gamma(i,j), lower triangle; -1 sentinel
  std::vector<double> kanti_;    // K[j][s-j] by anti-diagonal s (custom, uniform)

  std::vector<double> frag_gain_;  // x_i * (alpha+2) * Iu_i
  std::vector<double> frag_sj_;    // S_k * Jv_k
  std::vector<double> frag_loss_;  // sum_{j<i} x_j dx_j B[j][i]

  // per-step scratch
  std::vector<double> w_, xw_, x2w_, rw_, rxw_, suf_a_, suf_b_, suf_t_;
};

/// Literal evaluations of the interface sums (triple/double loops).  Used
/// by the per-run recurrence self-check; tests keep their own independent
/// copies.
std::vector<double> direct_coag_flux(const State& s, const DiscreteKernels& dk);
std::vector<double> direct_frag_flux(const State& s, const DiscreteKernels& dk);

}  // namespace pbe
