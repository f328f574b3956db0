#pragma once

#include <string>

#include "pbe/diagnostics.hpp"
#include "pbe/harness.hpp"
#include "pbe/state.hpp"

namespace pbe {

/// Full round-trip decimal formatting (17 significant digits) so output
/// tolerances are never masked by the writer.
std::string format_g17(double v);

/// "density_t<t>.csv" for a snapshot time.
std::string density_filename(double t);

void write_density_csv(const std::string& path, const State& s);
void write_moments_csv(const std::string& path, const MomentSeries& series);
void write_eoc_csv(const std::string& path, const EOCReport& rep);
void write_eoc_json(const std::string& path, const EOCReport& rep);

}  // namespace pbe
