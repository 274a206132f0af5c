#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace qtraj {

/// Default seed set for the verify suite; fixed so the whole suite is
/// deterministic and free of stochastic flakiness.
std::vector<std::uint64_t> default_verify_seeds();

/// Runs the invariant suites (norm preservation, master-oracle bounds,
/// RK4 convergence order, bit-exact replay, Poisson jump statistics)
/// across the given seeds, printing one pass/fail line per invariant.
/// Returns true when everything passed.
bool run_verify(std::ostream& out,
                const std::vector<std::uint64_t>& seeds = default_verify_seeds());

}  // namespace qtraj
