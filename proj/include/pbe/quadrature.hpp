#pragma once

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace pbe::quad {

/// Nodes and weights on [-1, 1].
struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Legendre rule of the given order (1..64), computed once by Newton
/// iteration on the Legendre polynomial and cached.
inline const Rule& gauss_legendre(int order) {
  if (order < 1 || order > 64)
    throw std::invalid_argument("quadrature order must lie in [1, 64]");
  static std::map<int, Rule> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(order);
  if (it != cache.end()) return it->second;

  Rule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  const int n = order;
  for (int k = 0; k < (n + 1) / 2; ++k) {
    double x = std::cos(M_PI * (k + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      // Legendre recurrence for P_n(x) and P'_n(x).
      double p0 = 1.0, p1 = x;
      for (int m = 2; m <= n; ++m) {
        double p2 = ((2 * m - 1) * x * p1 - (m - 1) * p0) / m;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-15) break;
    }
    double p0 = 1.0, p1 = x;
    for (int m = 2; m <= n; ++m) {
      double p2 = ((2 * m - 1) * x * p1 - (m - 1) * p0) / m;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[k] = -x;
    rule.weights[k] = w;
    rule.nodes[n - 1 - k] = x;
    rule.weights[n - 1 - k] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return cache.emplace(order, std::move(rule)).first->second;
}

template <class F>
double gl(F&& f, double a, double b, int order) {
  const Rule& r = gauss_legendre(order);
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double acc = 0.0;
  for (std::size_t k = 0; k < r.nodes.size(); ++k)
    acc += r.weights[k] * f(mid + half * r.nodes[k]);
  return acc * half;
}

namespace detail {
template <class F>
double simpson(F&& f, double a, double fa, double b, double fb, double m,
               double fm, double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::fabs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return simpson(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         simpson(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}
}  // namespace detail

/// Adaptive Simpson integration; integrand must be finite on [a, b].
template <class F>
double adaptive(F&& f, double a, double b, double tol = 1e-12,
                int max_depth = 48) {
  if (a == b) return 0.0;
  const double fa = f(a), fb = f(b);
  const double m = 0.5 * (a + b);
  const double fm = f(m);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return detail::simpson(f, a, fa, b, fb, m, fm, whole, tol, max_depth);
}

/// Integrates f over ]0, b] when f has an integrable singularity at 0.
/// Geometric panels toward the origin keep every evaluation strictly
/// positive; panels are added until their contribution is negligible, so
/// slowly decaying tails x^p with p just above -1 still resolve.
template <class F>
double left_singular(F&& f, double b, double tol = 1e-13) {
  if (b <= 0.0) throw std::invalid_argument("left_singular needs b > 0");
  double acc = 0.0;
  double hi = b;
  int quiet = 0;
  for (int k = 0; k < 4096 && quiet < 4; ++k) {
    const double lo = 0.5 * hi;
    const double panel = adaptive(f, lo, hi, tol);
    acc += panel;
    quiet = (std::fabs(panel) <= 0.05 * tol * std::fabs(acc)) ? quiet + 1 : 0;
    hi = lo;
  }
  return acc;
}

}  // namespace pbe::quad
