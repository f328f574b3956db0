#include "pbe/diagnostics.hpp"

#include <cmath>
#include <stdexcept>

#include "pbe/quadrature.hpp"
#include "pbe/simd/ops.hpp"

namespace pbe {

namespace {

bool same_mesh(const Mesh& a, const Mesh& b) {
  if (&a == &b) return true;
  return a.edges() == b.edges();
}

}  // namespace

double moment(const State& s, double j) {
  if (!s.mesh) throw std::invalid_argument("state has no mesh");
  const Mesh& mesh = *s.mesh;
  const int n = mesh.n_cells();
  if (j == 0.0) return simd::dot(s.c.data(), mesh.widths().data(), n);
  std::vector<double> wj(n);
  for (int i = 0; i < n; ++i)
    wj[i] = std::pow(mesh.center(i), j) * mesh.width(i);
  return simd::dot(s.c.data(), wj.data(), n);
}

double l1_distance(const State& a, const State& b) {
  if (!a.mesh || !b.mesh || !same_mesh(*a.mesh, *b.mesh))
    throw std::invalid_argument("l1_distance requires states on the same mesh");
  return simd::weighted_abs_diff(a.mesh->widths().data(), a.c.data(),
                                 b.c.data(), a.c.size());
}

double l1_distance(const State& a, const std::function<double(double)>& ref,
                   int quad_order) {
  if (!a.mesh) throw std::invalid_argument("state has no mesh");
  const Mesh& mesh = *a.mesh;
  double acc = 0.0;
  for (int i = 0; i < mesh.n_cells(); ++i) {
    const double avg =
        quad::gl(ref, mesh.edge(i), mesh.edge(i + 1), quad_order) /
        mesh.width(i);
    acc += mesh.width(i) * std::fabs(a.c[i] - avg);
  }
  return acc;
}

State restrict_to(const State& fine, std::shared_ptr<const Mesh> coarse) {
  if (!fine.mesh || !coarse)
    throw std::invalid_argument("restrict_to requires both meshes");
  const Mesh& fm = *fine.mesh;
  const Mesh& cm = *coarse;
  const double tol = 1e-12 * fm.domain_end();

  State out;
  out.t = fine.t;
  out.mesh = std::move(coarse);
  out.c.resize(cm.n_cells());

  int f = 0;
  if (std::fabs(fm.edge(0) - cm.edge(0)) > tol)
    throw std::invalid_argument("fine mesh is not a refinement: left bounds differ");
  for (int i = 0; i < cm.n_cells(); ++i) {
    double mass = 0.0;
    const double right = cm.edge(i + 1);
    while (f < fm.n_cells() && fm.edge(f + 1) <= right + tol) {
      mass += fine.c[f] * fm.width(f);
      ++f;
    }
    if (std::fabs(fm.edge(f) - right) > tol)
      throw std::invalid_argument(
          "fine mesh is not a refinement of the coarse mesh");
    out.c[i] = mass / cm.width(i);
  }
  return out;
}

}  // namespace pbe
