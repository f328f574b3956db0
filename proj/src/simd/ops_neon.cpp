// NEON variants for aarch64 builds.

#include "pbe/simd/ops.hpp"

#if defined(__aarch64__)

#include <arm_neon.h>

#include <cmath>

namespace pbe::simd::neon {

double dot(const double* a, const double* b, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
  }
  for (; i + 2 <= n; i += 2) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
  }
  double acc = vaddvq_f64(acc0) + vaddvq_f64(acc1);
  for (; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double dot3(const double* a, const double* b, const double* c, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t ab = vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i));
    acc0 = vfmaq_f64(acc0, ab, vld1q_f64(c + i));
  }
  double acc = vaddvq_f64(acc0);
  for (; i < n; ++i) acc += a[i] * b[i] * c[i];
  return acc;
}

double weighted_abs_diff(const double* w, const double* a, const double* b,
                         std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t d = vabsq_f64(vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
    acc0 = vfmaq_f64(acc0, vld1q_f64(w + i), d);
  }
  double acc = vaddvq_f64(acc0);
  for (; i < n; ++i) acc += w[i] * std::fabs(a[i] - b[i]);
  return acc;
}

}  // namespace pbe::simd::neon

#endif  // aarch64
