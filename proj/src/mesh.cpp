#include "pbe/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace pbe {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

void Mesh::finalize(double ratio_bound, MeshKind kind) {
  kind_ = kind;
  ratio_bound_ = ratio_bound;
  const int n = static_cast<int>(edges_.size()) - 1;
  centers_.resize(n);
  widths_.resize(n);
  for (int i = 0; i < n; ++i) {
    widths_[i] = edges_[i + 1] - edges_[i];
    centers_[i] = 0.5 * (edges_[i] + edges_[i + 1]);
    if (!(widths_[i] > 0.0))
      throw std::invalid_argument("mesh has a non-positive cell width");
  }
  h_ = *std::max_element(widths_.begin(), widths_.end());
  delta_h_ = *std::min_element(widths_.begin(), widths_.end());
  uniform_ = (h_ - delta_h_) <= 1e-12 * h_;
  if (h_ / delta_h_ > ratio_bound_ * (1.0 + 1e-12)) {
    throw std::invalid_argument(
        "mesh condition violated: max/min cell width ratio " +
        std::to_string(h_ / delta_h_) + " exceeds the configured bound " +
        std::to_string(ratio_bound_));
  }
  gamma_shortcut_ = (kind_ == MeshKind::uniform) && (x_min() < 0.499 * h_);
}

Mesh build_mesh(MeshKind kind, double x_min, double R, int n_cells,
                double ratio, double width_ratio_bound) {
  require(std::isfinite(x_min) && x_min >= 0.0, "x_min must be finite and >= 0");
  require(std::isfinite(R) && R > x_min, "R must be finite and exceed x_min");
  require(n_cells >= 2, "n_cells must be at least 2");
  require(width_ratio_bound >= 1.0, "width ratio bound L must be >= 1");

  Mesh mesh;
  mesh.edges_.resize(n_cells + 1);
  if (kind == MeshKind::uniform) {
    const double h = (R - x_min) / n_cells;
    for (int k = 0; k <= n_cells; ++k) mesh.edges_[k] = x_min + k * h;
  } else {
    require(x_min > 0.0, "geometric mesh requires x_min > 0");
    const double derived = std::pow(R / x_min, 1.0 / n_cells);
    if (ratio > 0.0) {
      require(ratio > 1.0, "geometric ratio must exceed 1");
      require(std::fabs(ratio - derived) <= 1e-6 * derived,
              "geometric ratio is inconsistent with the domain bounds");
    }
    const double step = std::log(R / x_min) / n_cells;
    for (int k = 0; k <= n_cells; ++k)
      mesh.edges_[k] = x_min * std::exp(k * step);
  }
  mesh.edges_.front() = x_min;
  mesh.edges_.back() = R;
  mesh.finalize(width_ratio_bound, kind);
  return mesh;
}

std::optional<int> Mesh::try_locate(double x) const {
  if (!(x > edges_.front()) || !(x <= edges_.back())) return std::nullopt;
  auto it = std::lower_bound(edges_.begin(), edges_.end(), x);
  // first edge >= x; the point belongs to the cell ending at that edge
  int cell = static_cast<int>(it - edges_.begin()) - 1;
  if (cell < 0) cell = 0;
  return cell;
}

int Mesh::locate(double x) const {
  auto cell = try_locate(x);
  if (!cell)
    throw std::invalid_argument("point " + std::to_string(x) +
                                " lies outside the domain ]" +
                                std::to_string(x_min()) + ", " +
                                std::to_string(domain_end()) + "]");
  return *cell;
}

std::optional<int> Mesh::gamma_index(int i, int j) const {
  const int n = n_cells();
  if (j < 0 || i < j || i >= n)
    throw std::invalid_argument("gamma_index requires 0 <= j <= i < n_cells");
  if (gamma_shortcut_) return i - j;
  const double diff = edges_[i + 1] - centers_[j];
  return try_locate(diff);
}

double Mesh::project(double x, ProjectMode mode) const {
  const int i = locate(x);
  switch (mode) {
    case ProjectMode::mid:
      return centers_[i];
    case ProjectMode::left:
      return edges_[i];
    default:
      return edges_[i + 1];
  }
}

}  // namespace pbe
