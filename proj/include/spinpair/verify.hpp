#pragma once

#include <cstdint>
#include <optional>
#include <utility>

#include "spinpair/analysis.hpp"

namespace spinpair {

struct VerifyOptions {
  int trials = 100;
  std::uint64_t seed = 0x5eedull;
  // Self-test hook: flip the sign of this (row, col) entry of the closed-form
  // 9x9 matrix before comparing, which must make the comparison fail.
  std::optional<std::pair<int, int>> inject_flip;
};

struct VerifyCheck {
  std::string name;
  bool pass = false;
  std::string detail;  // worst deviation, or what went wrong
};

struct VerifyReport {
  std::vector<VerifyCheck> checks;
  int trials = 0;
  bool all_pass() const;
};

// Cross-checks the projected generator against its closed form on randomly
// drawn parameter sets, plus the structural properties the dynamics must
// satisfy (sector closure, conserved quantities, spectral stability, steady
// state consistency, engine agreement). Deterministic for a fixed seed.
VerifyReport run_verification(const VerifyOptions& opts = {});

}  // namespace spinpair
