#include "pbe/simd/dispatch.hpp"

#include <cstdlib>
#include <cstring>

#include "pbe/simd/ops.hpp"

namespace pbe::simd {

namespace {

bool cpu_has_avx2() {
#if defined(PBE_SIMD_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

struct OpsTable {
  double (*dot)(const double*, const double*, std::size_t);
  double (*dot3)(const double*, const double*, const double*, std::size_t);
  double (*weighted_abs_diff)(const double*, const double*, const double*,
                              std::size_t);
  Backend backend;
};

OpsTable make_table(Backend b) {
  switch (b) {
#ifdef PBE_SIMD_HAVE_AVX2
    case Backend::avx2:
      return {&avx2::dot, &avx2::dot3, &avx2::weighted_abs_diff, Backend::avx2};
#endif
#ifdef PBE_SIMD_HAVE_NEON
    case Backend::neon:
      return {&neon::dot, &neon::dot3, &neon::weighted_abs_diff, Backend::neon};
#endif
    default:
      return {&scalar::dot, &scalar::dot3, &scalar::weighted_abs_diff,
              Backend::scalar};
  }
}

const OpsTable& table() {
  static const OpsTable t = make_table(select_backend(std::getenv("PBE_SIMD")));
  return t;
}

}  // namespace

bool parse_backend(const char* text, Backend& out) {
  if (text == nullptr) return false;
  if (std::strcmp(text, "scalar") == 0) {
    out = Backend::scalar;
    return true;
  }
  if (std::strcmp(text, "avx2") == 0) {
    out = Backend::avx2;
    return true;
  }
  if (std::strcmp(text, "neon") == 0) {
    out = Backend::neon;
    return true;
  }
  return false;
}

Backend select_backend(const char* env_override) {
  if (env_override != nullptr && std::strcmp(env_override, "auto") != 0) {
    Backend requested;
    if (!parse_backend(env_override, requested)) return Backend::scalar;
#ifdef PBE_SIMD_HAVE_AVX2
    if (requested == Backend::avx2 && cpu_has_avx2()) return Backend::avx2;
#endif
#ifdef PBE_SIMD_HAVE_NEON
    if (requested == Backend::neon) return Backend::neon;
#endif
    return Backend::scalar;
  }
#ifdef PBE_SIMD_HAVE_NEON
  return Backend::neon;
#else
  return cpu_has_avx2() ? Backend::avx2 : Backend::scalar;
#endif
}

Backend active_backend() { return table().backend; }

const char* backend_name(Backend b) {
  switch (b) {
    case Backend::avx2:
      return "avx2";
    case Backend::neon:
      return "neon";
    default:
      return "scalar";
  }
}

double dot(const double* a, const double* b, std::size_t n) {
  return table().dot(a, b, n);
}

double dot3(const double* a, const double* b, const double* c, std::size_t n) {
  return table().dot3(a, b, c, n);
}

double weighted_abs_diff(const double* w, const double* a, const double* b,
                         std::size_t n) {
  return table().weighted_abs_diff(w, a, b, n);
}

}  // namespace pbe::simd
