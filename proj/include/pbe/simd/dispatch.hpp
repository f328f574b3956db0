#pragma once

#include "pbe/simd/ops.hpp"

namespace pbe::simd {

// Backend selection order: PBE_SIMD env override ("scalar", "avx2", "neon",
// "auto"), then the best instruction set the CPU reports.  An override
// naming an unavailable backend falls back to scalar.
Backend select_backend(const char* env_override);

/// Parses an override string; Backend::scalar for unrecognized values is
/// decided by select_backend, this only maps the spelling.
bool parse_backend(const char* text, Backend& out);

}  // namespace pbe::simd
