#pragma once

#include <iosfwd>

#include "pbe/config.hpp"

namespace pbe {

/// Invariant battery behind `pbe validate`: mesh geometry, breakage
/// integral identities, flux recurrence against the literal sums,
/// positivity, the mass ledger and the analytic-reference residuals.
/// Long-horizon configs are probed on a shortened run (min(T, 2), at most
/// 240 cells) so the command stays quick.  Prints one pass/fail line per
/// check and returns the number of failures.
int run_validation_suite(const SimConfig& cfg, std::ostream& out);

}  // namespace pbe
