#include "pbe/flux_engine.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "pbe/simd/ops.hpp"

namespace pbe {

FluxEngine::FluxEngine(std::shared_ptr<const Mesh> mesh,
                       const DiscreteKernels& dk, Path path)
    : mesh_(std::move(mesh)), dk_(&dk) {
  if (!mesh_) throw std::invalid_argument("flux engine requires a mesh");
  n_ = mesh_->n_cells();
  if (dk.n != n_)
    throw std::invalid_argument(
        "discrete kernels were built for a different mesh");
  generic_ = (path == Path::generic);
  uniform_fast_ = !generic_ && mesh_->kind() == MeshKind::uniform &&
                  mesh_->x_min() < 0.499 * mesh_->h();
  separable_coag_ = !generic_ && dk.has_coag && dk.coag_kind != CoagKind::custom;

  const auto& xc = mesh_->centers();
  const auto& dx = mesh_->widths();

  if (dk.has_coag) {
    // An interface difference below x_min (possible only with x_min > 0)
    // clamps to the first cell: the truncated inner integral then spans the
    // whole domain.  This keeps the birth corrections subtractive from the
    // own-cell loss term, which is what preserves positivity.
    gamma_diag_.resize(n_);
    for (int i = 0; i < n_; ++i)
      gamma_diag_[i] = mesh_->gamma_index(i, i).value_or(0);
    if (!uniform_fast_) {
      gamma_tri_.resize(static_cast<std::size_t>(n_) * (n_ + 1) / 2);
      for (int i = 0; i < n_; ++i)
        for (int j = 0; j <= i; ++j)
          gamma_tri_[static_cast<std::size_t>(i) * (i + 1) / 2 + j] =
              mesh_->gamma_index(i, j).value_or(0);
    }
    if (uniform_fast_ && dk.coag_kind == CoagKind::custom) {
      // anti-diagonal copy of K so the birth reduction reads contiguously
      kanti_.assign(static_cast<std::size_t>(n_) * n_, 0.0);
      for (int s = 0; s <= n_ - 2; ++s)
        for (int j = 0; j <= s; ++j)
          kanti_[static_cast<std::size_t>(s) * n_ + j] = dk.k_at(j, s - j);
    }
  }

  if (dk.has_frag) {
    const auto bf = detail::breakage_cell_factors(dk.alpha, *mesh_);
    frag_gain_.resize(n_);
    frag_sj_.resize(n_);
    frag_loss_.assign(n_, 0.0);
    for (int i = 0; i < n_; ++i) {
      frag_gain_[i] = xc[i] * (dk.alpha + 2.0) * bf.Iu[i];
      frag_sj_[i] = dk.S[i] * bf.Jv[i];
      double acc = 0.0;
      for (int j = 0; j < i; ++j) acc += xc[j] * dx[j] * dk.b_at(j, i);
      frag_loss_[i] = acc;
    }
  }

  w_.resize(n_);
  xw_.resize(n_);
  x2w_.resize(n_);
  rw_.resize(n_);
  rxw_.resize(n_);
  suf_a_.resize(n_ + 1);
  suf_b_.resize(n_ + 1);
  suf_t_.resize(n_ + 1);
}

void FluxEngine::assemble(const std::vector<double>& inc,
                          std::vector<double>& iface,
                          bool zero_right_boundary) const {
  iface.resize(n_ + 1);
  iface[0] = 0.0;
  double sum_abs = 0.0;
  for (int i = 0; i < n_; ++i) {
    iface[i + 1] = iface[i] + inc[i];
    sum_abs += std::fabs(inc[i]);
  }
  // Interfaces whose exact value is many orders below the flux scale can
  // come out as negative rounding dust after the prefix accumulation; the
  // exact values are sums of nonnegative terms, so dust is zeroed and
  // anything beyond the accumulation error bound is a real sign error.
  const double dust =
      2.0 * n_ * std::numeric_limits<double>::epsilon() * sum_abs;
  for (int m = 1; m <= n_; ++m) {
    if (iface[m] < 0.0) {
      if (iface[m] >= -dust)
        iface[m] = 0.0;
      else
        throw std::runtime_error(
            "internal flux error: negative interface flux at interface " +
            std::to_string(m) + " (" + std::to_string(iface[m]) + ")");
    }
  }
  if (zero_right_boundary) {
    if (std::fabs(iface[n_]) > dust)
      throw std::runtime_error(
          "internal flux error: fragmentation flux failed to vanish at the "
          "right boundary");
    iface[n_] = 0.0;
  }
}

void FluxEngine::compute_coag(const std::vector<double>& c, FluxPair& out) {
  const auto& xc = mesh_->centers();
  const double* K = dk_->K.data();
  const CoagKind family = dk_->coag_kind;

  if (separable_coag_) {
    suf_a_[n_] = 0.0;
    suf_b_[n_] = 0.0;
    for (int k = n_ - 1; k >= 0; --k) {
      suf_a_[k] = suf_a_[k + 1] + w_[k];
      suf_b_[k] = suf_b_[k + 1] + xc[k] * w_[k];
    }
  }
  if (uniform_fast_) {
    for (int t = 0; t < n_; ++t) rw_[t] = w_[n_ - 1 - t];
    if (family == CoagKind::product) {
      for (int j = 0; j < n_; ++j) x2w_[j] = xc[j] * xw_[j];
      for (int t = 0; t < n_; ++t) rxw_[t] = xw_[n_ - 1 - t];
    }
  }

  for (int i = 0; i < n_; ++i) {
    const int g = gamma_diag_[i];
    double loss = 0.0;
    switch (separable_coag_ ? family : CoagKind::custom) {
      case CoagKind::constant:
        loss = dk_->beta * suf_a_[g];
        break;
      case CoagKind::sum:
        loss = xc[i] * suf_a_[g] + suf_b_[g];
        break;
      case CoagKind::product:
        loss = xc[i] * suf_b_[g];
        break;
      default:
        loss = simd::dot(K + static_cast<std::size_t>(i) * n_ + g,
                         w_.data() + g, n_ - g);
        break;
    }
    loss *= xw_[i];

    double birth = 0.0;
    if (i > 0) {
      if (uniform_fast_) {
        const int s = i - 1;
        const int len = s + 1;
        const int off = n_ - 1 - s;  // rw_[off + j] = w_[s - j]
        switch (family) {
          case CoagKind::constant:
            birth = dk_->beta * simd::dot(xw_.data(), rw_.data() + off, len);
            break;
          case CoagKind::sum:
            // x_j + x_{s-j} is constant along the anti-diagonal
            birth = (xc[0] + xc[s]) * simd::dot(xw_.data(), rw_.data() + off, len);
            break;
          case CoagKind::product:
            birth = simd::dot(x2w_.data(), rxw_.data() + off, len);
            break;
          default:
            birth = simd::dot3(xw_.data(),
                               kanti_.data() + static_cast<std::size_t>(s) * n_,
                               rw_.data() + off, len);
            break;
        }
      } else if (separable_coag_) {
        // the inner k-range collapses to suffix-sum differences, so no
        // kernel row is touched (those strided loads dominate otherwise)
        const std::size_t row = static_cast<std::size_t>(i) * (i + 1) / 2;
        const std::size_t prev = static_cast<std::size_t>(i - 1) * i / 2;
        for (int j = 0; j < i; ++j) {
          const int g1 = gamma_tri_[row + j];
          const int g0 = gamma_tri_[prev + j];
          if (g1 <= g0) continue;
          switch (family) {
            case CoagKind::constant:
              birth += xw_[j] * dk_->beta * (suf_a_[g0] - suf_a_[g1]);
              break;
            case CoagKind::sum:
              birth += xw_[j] * (xc[j] * (suf_a_[g0] - suf_a_[g1]) +
                                 (suf_b_[g0] - suf_b_[g1]));
              break;
            default:  // product
              birth += xw_[j] * xc[j] * (suf_b_[g0] - suf_b_[g1]);
              break;
          }
        }
      } else {
        for (int j = 0; j < i; ++j) {
          const int g1 = gamma_tri(i, j);
          const int g0 = gamma_tri(i - 1, j);
          if (g1 <= g0) continue;
          // short ranges on graded meshes; dispatching a reduction kernel
          // would cost more than the loop
          const int len = g1 - g0;
          const double* krow = K + static_cast<std::size_t>(j) * n_ + g0;
          const double* wk = w_.data() + g0;
          if (len <= 24) {
            double acc = 0.0;
            for (int k = 0; k < len; ++k) acc += krow[k] * wk[k];
            birth += xw_[j] * acc;
          } else {
            birth += xw_[j] * simd::dot(krow, wk, len);
          }
        }
      }
    }
    out.coag_inc[i] = loss - birth;
  }
}

void FluxEngine::compute_frag(const std::vector<double>& c, FluxPair& out) {
  const auto& xc = mesh_->centers();
  const auto& dx = mesh_->widths();

  if (!generic_) {
    suf_t_[n_] = 0.0;
    for (int k = n_ - 1; k >= 0; --k)
      suf_t_[k] = suf_t_[k + 1] + frag_sj_[k] * c[k];
    for (int i = 0; i < n_; ++i) {
      const double birth = frag_gain_[i] * suf_t_[i + 1];
      const double loss = dk_->S[i] * w_[i] * frag_loss_[i];
      out.frag_inc[i] = birth - loss;
    }
  } else {
    const double* B = dk_->B.data();
    for (int i = 0; i < n_; ++i) {
      const double birth =
          xc[i] * dx[i] *
          simd::dot3(dk_->S.data() + i + 1,
                     B + static_cast<std::size_t>(i) * n_ + i + 1,
                     w_.data() + i + 1, n_ - 1 - i);
      double col = 0.0;
      for (int j = 0; j < i; ++j)
        col += xc[j] * dx[j] * B[static_cast<std::size_t>(j) * n_ + i];
      out.frag_inc[i] = birth - dk_->S[i] * w_[i] * col;
    }
  }
}

void FluxEngine::compute(const State& s, FluxPair& out) {
  if (static_cast<int>(s.c.size()) != n_)
    throw std::invalid_argument("state size does not match the flux engine");
  const auto& dx = mesh_->widths();
  const auto& xc = mesh_->centers();
  for (int k = 0; k < n_; ++k) {
    w_[k] = s.c[k] * dx[k];
    xw_[k] = xc[k] * w_[k];
  }
  out.coag_inc.assign(n_, 0.0);
  out.frag_inc.assign(n_, 0.0);
  if (dk_->has_coag) compute_coag(s.c, out);
  if (dk_->has_frag) compute_frag(s.c, out);
  assemble(out.coag_inc, out.coag, false);
  assemble(out.frag_inc, out.frag, true);
}

FluxPair FluxEngine::compute(const State& s) {
  FluxPair fp;
  compute(s, fp);
  return fp;
}

std::vector<double> direct_coag_flux(const State& s, const DiscreteKernels& dk) {
  const Mesh& mesh = *s.mesh;
  const int n = mesh.n_cells();
  std::vector<double> out(n + 1, 0.0);
  if (!dk.has_coag) return out;
  const auto& xc = mesh.centers();
  const auto& dx = mesh.widths();
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int j = 0; j <= i; ++j) {
      const int g = mesh.gamma_index(i, j).value_or(0);
      for (int k = g; k < n; ++k)
        acc += xc[j] * dk.k_at(j, k) * s.c[j] * s.c[k] * dx[j] * dx[k];
    }
    out[i + 1] = acc;
  }
  return out;
}

std::vector<double> direct_frag_flux(const State& s, const DiscreteKernels& dk) {
  const Mesh& mesh = *s.mesh;
  const int n = mesh.n_cells();
  std::vector<double> out(n + 1, 0.0);
  if (!dk.has_frag) return out;
  const auto& xc = mesh.centers();
  const auto& dx = mesh.widths();
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int j = 0; j <= i; ++j)
      for (int k = i + 1; k < n; ++k)
        acc += xc[j] * dk.S[k] * dk.b_at(j, k) * s.c[k] * dx[k] * dx[j];
    out[i + 1] = acc;
  }
  return out;
}

}  // namespace pbe
