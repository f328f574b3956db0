#pragma once

#include <cstddef>

// Data-parallel reduction kernels used by the flux and diagnostics inner
// loops.  Every operation has a scalar reference implementation plus SIMD
// variants; the active variant is picked once at startup (see dispatch.hpp)
// so a given process always reduces in the same lane order and results are
// reproducible run to run.

namespace pbe::simd {

enum class Backend { scalar, avx2, neon };

/// Backend the dispatcher selected for this process.
Backend active_backend();
const char* backend_name(Backend b);

/// sum_i a[i]*b[i]
double dot(const double* a, const double* b, std::size_t n);

/// sum_i a[i]*b[i]*c[i]
double dot3(const double* a, const double* b, const double* c, std::size_t n);

/// sum_i w[i]*|a[i]-b[i]|
double weighted_abs_diff(const double* w, const double* a, const double* b,
                         std::size_t n);

// Per-backend entry points, exposed so the equivalence tests can compare
// implementations directly regardless of what the dispatcher picked.
namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
double dot3(const double* a, const double* b, const double* c, std::size_t n);
double weighted_abs_diff(const double* w, const double* a, const double* b,
                         std::size_t n);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define PBE_SIMD_HAVE_AVX2 1
namespace avx2 {
double dot(const double* a, const double* b, std::size_t n);
double dot3(const double* a, const double* b, const double* c, std::size_t n);
double weighted_abs_diff(const double* w, const double* a, const double* b,
                         std::size_t n);
}  // namespace avx2
#endif

#if defined(__aarch64__)
#define PBE_SIMD_HAVE_NEON 1
namespace neon {
double dot(const double* a, const double* b, std::size_t n);
double dot3(const double* a, const double* b, const double* c, std::size_t n);
double weighted_abs_diff(const double* w, const double* a, const double* b,
                         std::size_t n);
}  // namespace neon
#endif

}  // namespace pbe::simd
