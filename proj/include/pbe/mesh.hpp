#pragma once

#include <optional>
#include <vector>

namespace pbe {

enum class MeshKind { uniform, geometric };
enum class ProjectMode { mid, left, right };

/// Volume mesh of the truncated domain ]x_min, R].  Cells are right-closed
/// intervals ]edge(i), edge(i+1)]; a point sitting exactly on an interior
/// edge belongs to the cell on its left.  Immutable after construction and
/// safe to share across threads.
class Mesh {
 public:
  static constexpr double default_width_ratio_bound = 4.0;

  int n_cells() const { return static_cast<int>(widths_.size()); }
  double x_min() const { return edges_.front(); }
  double domain_end() const { return edges_.back(); }

  const std::vector<double>& edges() const { return edges_; }
  const std::vector<double>& centers() const { return centers_; }
  const std::vector<double>& widths() const { return widths_; }

  double edge(int k) const { return edges_[k]; }
  double center(int i) const { return centers_[i]; }
  double width(int i) const { return widths_[i]; }

  /// Largest and smallest cell width; their ratio is bounded by the
  /// configured width-ratio constant L.
  double h() const { return h_; }
  double delta_h() const { return delta_h_; }
  double width_ratio() const { return h_ / delta_h_; }
  double width_ratio_bound() const { return ratio_bound_; }

  MeshKind kind() const { return kind_; }
  /// All widths equal within relative 1e-12.
  bool is_uniform() const { return uniform_; }

  /// Index of the cell containing x; throws if x lies outside ]x_min, R].
  int locate(double x) const;
  std::optional<int> try_locate(double x) const;

  /// Cell index gamma such that edge(i+1) - center(j) falls in cell gamma.
  /// Requires 0 <= j <= i < n_cells.  Returns nullopt when the difference
  /// does not exceed x_min (only possible with x_min > 0); the coagulation
  /// birth term for that pair is defined as zero.
  std::optional<int> gamma_index(int i, int j) const;

  /// Center / left edge / right edge of the cell containing x.
  double project(double x, ProjectMode mode) const;

  friend Mesh build_mesh(MeshKind, double, double, int, double, double);

 private:
  Mesh() = default;
  void finalize(double ratio_bound, MeshKind kind);

  std::vector<double> edges_, centers_, widths_;
  double h_ = 0.0, delta_h_ = 0.0, ratio_bound_ = 0.0;
  MeshKind kind_ = MeshKind::uniform;
  bool uniform_ = false;
  bool gamma_shortcut_ = false;  // uniform and x_min < h/2: gamma(i,j) = i-j
};

/// Builds a uniform or geometric mesh of ]x_min, R] with n_cells cells.
/// For geometric meshes the edges form a geometric progression (requires
/// x_min > 0); `ratio` is the successive-edge ratio and may be <= 0 to
/// derive it from the bounds, otherwise it must be consistent with them.
/// `width_ratio_bound` is the admissible bound L on h/delta_h; meshes
/// violating it are rejected as a mesh-condition violation.
Mesh build_mesh(MeshKind kind, double x_min, double R, int n_cells,
                double ratio = 0.0,
                double width_ratio_bound = Mesh::default_width_ratio_bound);

}  // namespace pbe
