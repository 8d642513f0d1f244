#pragma once

#include "fdsec/system_config.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace fdsec {

struct CheckResult {
  std::string name;
  double worst = 0.0;      // largest residual over all cases
  double tolerance = 0.0;
  bool passed = false;
};

/// Structural checks of the block model on `cases` random draws of `cfg`:
/// CP identity, AN nullity (both null-space routes), circulant
/// diagonalization, matrix-vs-recursion equivalence, AN invisibility at Bob
/// in the time domain, and agreement of the structured and dense rate routes.
std::vector<CheckResult> run_self_check(const SystemConfig& cfg, int cases, std::uint64_t seed);

}  // namespace fdsec
