#include "pbe/kernels.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "pbe/quadrature.hpp"

namespace pbe {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

double KernelSet::coag(double x, double y) const {
  switch (coag_) {
    case CoagKind::none:
      return 0.0;
    case CoagKind::constant:
      return beta_;
    case CoagKind::sum:
      return x + y;
    case CoagKind::product:
      return x * y;
    default:
      return custom_(x, y);
  }
}

double KernelSet::selection(double x) const {
  if (!frag_) return 0.0;
  return std::pow(x, sel_exp_);
}

double KernelSet::breakage(double x, double y) const {
  if (!frag_ || !(0.0 < x && x < y)) return 0.0;
  return (alpha_ + 2.0) / y * std::pow(x / y, alpha_);
}

KernelSet make_kernel_set(const KernelSpec& spec) {
  KernelSet ks;
  ks.coag_ = spec.coag;
  ks.beta_ = spec.beta;
  ks.custom_ = spec.custom;
  ks.custom_bound_ = spec.custom_bound;
  ks.frag_ = spec.fragmentation;

  require(spec.coag != CoagKind::none || spec.fragmentation,
          "kernel spec enables neither coagulation nor fragmentation");
  if (spec.coag == CoagKind::constant)
    require(spec.beta >= 0.0 && std::isfinite(spec.beta),
            "kernel.beta: must be finite and >= 0");
  if (spec.coag == CoagKind::custom)
    require(static_cast<bool>(spec.custom),
            "custom coagulation kernel requires a callable");

  if (spec.fragmentation) {
    require(spec.alpha > -1.0,
            "kernel.alpha: must lie in (-1, 0]; the mean daughter count "
            "diverges at -1");
    require(spec.alpha <= 0.0,
            "kernel.alpha: must lie in (-1, 0] for the power-law breakage "
            "family");
    ks.alpha_ = spec.alpha;
    ks.sel_exp_ = spec.selection_exponent.value_or(1.0 + spec.alpha);
    require(std::isfinite(ks.sel_exp_),
            "kernel.selection_exponent: must be finite");
  }
  return ks;
}

SupNorms sup_norms(const KernelSet& ks, double x_min, double R) {
  require(R > x_min && x_min >= 0.0, "sup_norms requires R > x_min >= 0");
  SupNorms s;
  switch (ks.coag_kind()) {
    case CoagKind::none:
      break;
    case CoagKind::constant:
      s.sup_K = ks.beta();
      break;
    case CoagKind::sum:
      s.sup_K = 2.0 * R;
      break;
    case CoagKind::product:
      s.sup_K = R * R;
      break;
    case CoagKind::custom:
      if (ks.custom_bound() >= 0.0) {
        s.sup_K = ks.custom_bound();
      } else {
        // no declared bound: dense sampling, flagged as approximate
        const int m = 256;
        double mx = 0.0;
        for (int i = 0; i <= m; ++i) {
          for (int j = i; j <= m; ++j) {
            const double x = x_min + (R - x_min) * i / m;
            const double y = x_min + (R - x_min) * j / m;
            mx = std::max(mx, ks.coag(x, y));
          }
        }
        s.sup_K = mx;
        s.approximate = true;
      }
      break;
  }
  if (ks.has_frag()) {
    s.eta = ks.eta();
    const double p = ks.selection_exponent();
    if (p >= 0.0) {
      s.sup_S = std::pow(R, p);
    } else {
      require(x_min > 0.0,
              "selection rate with negative exponent is unbounded on a "
              "domain reaching 0");
      s.sup_S = std::pow(x_min, p);
    }
  }
  return s;
}

namespace detail {

double power_integral(double p, double a, double b) {
  if (p == -1.0) {
    if (!(a > 0.0))
      throw std::invalid_argument("power_integral: log branch needs a > 0");
    return std::log(b / a);
  }
  const double ap = (a > 0.0) ? std::pow(a, p + 1.0) : 0.0;
  if (a == 0.0 && p <= -1.0)
    throw std::invalid_argument("power_integral: divergent at 0 for p <= -1");
  return (std::pow(b, p + 1.0) - ap) / (p + 1.0);
}

BreakageFactors breakage_cell_factors(double alpha, const Mesh& mesh) {
  const int n = mesh.n_cells();
  BreakageFactors f;
  f.Iu.resize(n);
  f.Jv.resize(n);
  for (int i = 0; i < n; ++i) {
    const double a = mesh.edge(i), b = mesh.edge(i + 1);
    f.Iu[i] = power_integral(alpha, a, b);
    // parent factor: only read for cells strictly above some daughter cell,
    // so a == 0 (first cell of a mesh starting at the origin) never reaches
    // the flux sums; store 0 there.
    f.Jv[i] = (a > 0.0) ? power_integral(-alpha - 1.0, a, b) : 0.0;
  }
  return f;
}

namespace {

// Average of B over the admissible triangle {a < u < v <= b} of a diagonal
// cell, divided by the cell area.
double breakage_diagonal_average(double alpha, double a, double b) {
  const double dx = b - a;
  double corr = 0.0;
  if (a > 0.0) {
    const double jab = (alpha == 0.0) ? std::log(b / a)
                                      : (std::pow(b, -alpha) - std::pow(a, -alpha)) / (-alpha);
    corr = std::pow(a, alpha + 1.0) * jab;
  }
  return (alpha + 2.0) / ((alpha + 1.0) * dx * dx) * (dx - corr);
}

}  // namespace

}  // namespace detail

DiscreteKernels discretize_kernels(const KernelSet& ks, const Mesh& mesh,
                                   int quadrature_order) {
  if (quadrature_order < 1)
    throw std::invalid_argument("quadrature_order must be >= 1");
  const int n = mesh.n_cells();
  DiscreteKernels dk;
  dk.n = n;
  dk.has_coag = ks.has_coag();
  dk.has_frag = ks.has_frag();
  dk.coag_kind = ks.coag_kind();
  dk.beta = ks.beta();
  dk.alpha = ks.alpha();
  dk.selection_exponent = ks.selection_exponent();

  const auto& xc = mesh.centers();

  if (dk.has_coag) {
    dk.K.assign(static_cast<std::size_t>(n) * n, 0.0);
    switch (ks.coag_kind()) {
      case CoagKind::constant:
        for (auto& v : dk.K) v = ks.beta();
        break;
      case CoagKind::sum:
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            dk.K[static_cast<std::size_t>(i) * n + j] = xc[i] + xc[j];
        break;
      case CoagKind::product:
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            dk.K[static_cast<std::size_t>(i) * n + j] = xc[i] * xc[j];
        break;
      default: {
        const auto& rule = quad::gauss_legendre(quadrature_order);
        for (int i = 0; i < n; ++i) {
          const double mi = xc[i], hi = 0.5 * mesh.width(i);
          for (int j = i; j < n; ++j) {
            const double mj = xc[j], hj = 0.5 * mesh.width(j);
            double acc = 0.0;
            for (std::size_t p = 0; p < rule.nodes.size(); ++p) {
              const double u = mi + hi * rule.nodes[p];
              double inner = 0.0;
              for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
                const double v = mj + hj * rule.nodes[q];
                const double kv = ks.coag(u, v);
                if (!std::isfinite(kv))
                  throw std::runtime_error(
                      "kernel discretization failed: non-finite coagulation "
                      "value inside cell pair (" + std::to_string(i) + ", " +
                      std::to_string(j) + ")");
                inner += rule.weights[q] * kv;
              }
              acc += rule.weights[p] * inner;
            }
            const double avg = 0.25 * acc;  // weights normalize over [-1,1]^2
            dk.K[static_cast<std::size_t>(i) * n + j] = avg;
            dk.K[static_cast<std::size_t>(j) * n + i] = avg;
          }
        }
        break;
      }
    }
  }

  if (dk.has_frag) {
    const double alpha = ks.alpha();
    const double sel = ks.selection_exponent();
    dk.B.assign(static_cast<std::size_t>(n) * n, 0.0);
    dk.S.resize(n);
    const auto bf = detail::breakage_cell_factors(alpha, mesh);
    for (int i = 0; i < n; ++i) {
      const double a = mesh.edge(i), b = mesh.edge(i + 1);
      if (a == 0.0 && sel <= -1.0)
        throw std::runtime_error(
            "kernel discretization failed: selection average diverges on "
            "cell 0 touching the origin");
      dk.S[i] = detail::power_integral(sel, a, b) / mesh.width(i);
      for (int k = i; k < n; ++k) {
        double avg;
        if (k == i) {
          avg = detail::breakage_diagonal_average(alpha, a, b);
        } else {
          avg = (alpha + 2.0) * bf.Iu[i] * bf.Jv[k] /
                (mesh.width(i) * mesh.width(k));
        }
        if (!std::isfinite(avg))
          throw std::runtime_error(
              "kernel discretization failed: non-finite breakage average for "
              "cell pair (" + std::to_string(i) + ", " + std::to_string(k) +
              ")");
        dk.B[static_cast<std::size_t>(i) * n + k] = avg;
      }
    }
  } else {
    dk.S.assign(n, 0.0);
  }

  const SupNorms s = sup_norms(ks, mesh.x_min(), mesh.domain_end());
  dk.sup_K = s.sup_K;
  dk.sup_S = s.sup_S;
  dk.eta = s.eta;
  dk.sup_approximate = s.approximate;
  return dk;
}

}  // namespace pbe
