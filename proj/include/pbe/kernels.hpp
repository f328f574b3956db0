#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "pbe/mesh.hpp"

namespace pbe {

enum class CoagKind { none, constant, sum, product, custom };

/// Declarative description of the kernel triple; validated by
/// make_kernel_set.
struct KernelSpec {
  CoagKind coag = CoagKind::sum;
  double beta = 1.0;  // scale of the constant coagulation family
  std::function<double(double, double)> custom;
  double custom_bound = -1.0;  // declared sup of a custom kernel, < 0 if none

  bool fragmentation = true;
  double alpha = -0.5;  // breakage exponent, in (-1, 0]
  std::optional<double> selection_exponent;  // default 1 + alpha
};

/// Continuous kernel triple: coagulation rate K(x,y), selection rate
/// S(x) = x^selection_exponent and the power-law breakage family
/// B(x,y) = (alpha+2)/y * (x/y)^alpha on 0 < x < y, singular at the origin
/// for alpha < 0.  Immutable once built.
class KernelSet {
 public:
  double coag(double x, double y) const;
  double selection(double x) const;
  double breakage(double x, double y) const;

  /// Mean daughter count per breakage event, (alpha+2)/(alpha+1).
  double eta() const { return (alpha_ + 2.0) / (alpha_ + 1.0); }

  CoagKind coag_kind() const { return coag_; }
  double beta() const { return beta_; }
  double alpha() const { return alpha_; }
  double selection_exponent() const { return sel_exp_; }
  bool has_coag() const { return coag_ != CoagKind::none; }
  bool has_frag() const { return frag_; }
  const std::function<double(double, double)>& custom() const { return custom_; }
  double custom_bound() const { return custom_bound_; }

  friend KernelSet make_kernel_set(const KernelSpec& spec);

 private:
  KernelSet() = default;
  CoagKind coag_ = CoagKind::none;
  double beta_ = 1.0;
  std::function<double(double, double)> custom_;
  double custom_bound_ = -1.0;
  bool frag_ = false;
  double alpha_ = 0.0;
  double sel_exp_ = 1.0;
};

KernelSet make_kernel_set(const KernelSpec& spec);

struct SupNorms {
  double sup_K = 0.0;
  double sup_S = 0.0;
  double eta = 0.0;
  bool approximate = false;  // custom kernel bounded by dense sampling only
};

/// Suprema of the kernel triple over the truncated domain, used by the
/// positivity time-step bound.
SupNorms sup_norms(const KernelSet& ks, double x_min, double R);

/// Cell-pair averages of the kernel triple.  K is symmetric; B is stored
/// as B[daughter * n + parent] and vanishes for daughter index > parent.
/// The diagonal B entries integrate over the admissible triangle u < v
/// only; the interface fluxes never read them.
struct DiscreteKernels {
  int n = 0;
  std::vector<double> K;  // n*n, row-major; empty when coagulation is off
  std::vector<double> B;  // n*n, row-major; empty when fragmentation is off
  std::vector<double> S;  // n
  double sup_K = 0.0, sup_S = 0.0, eta = 0.0;
  bool sup_approximate = false;

  bool has_coag = false, has_frag = false;
  CoagKind coag_kind = CoagKind::none;
  double beta = 0.0, alpha = 0.0, selection_exponent = 0.0;

  double k_at(int i, int j) const { return K[static_cast<std::size_t>(i) * n + j]; }
  double b_at(int daughter, int parent) const {
    return B[static_cast<std::size_t>(daughter) * n + parent];
  }
};

/// Averages the kernels over every cell (pair).  Power-law factors use
/// closed-form antiderivatives, with the logarithm branch at exponent -1,
/// so the x^alpha singularity is never sampled pointwise.  Polynomial
/// coagulation families average exactly; custom kernels use tensor-product
/// Gauss-Legendre of the given order.
DiscreteKernels discretize_kernels(const KernelSet& ks, const Mesh& mesh,
                                   int quadrature_order = 5);

namespace detail {

/// integral of t^p over [a, b], 0 <= a < b, with the log branch at p = -1.
/// a == 0 requires p > -1.
double power_integral(double p, double a, double b);

/// Per-cell factors of the separable breakage average: daughter factor
/// Iu[i] = integral of u^alpha over cell i, parent factor Jv[k] = integral
/// of v^(-alpha-1) over cell k (0 when the cell touches the origin; such a
/// parent only ever appears through the diagonal entry).
struct BreakageFactors {
  std::vector<double> Iu, Jv;
};
BreakageFactors breakage_cell_factors(double alpha, const Mesh& mesh);

}  // namespace detail

}  // namespace pbe
