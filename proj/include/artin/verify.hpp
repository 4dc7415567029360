#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "artin/duality.hpp"
#include "artin/sieve.hpp"

namespace artin {

struct VerifyOptions {
  std::uint64_t nmax = 5000;
  unsigned kmax = 3;
  std::uint64_t seed = 1;
  unsigned weights = 5;          // random weights seeded seed, seed+1, ...
  std::uint64_t rearrangement_x = 2000;  // capped at nmax
  std::uint64_t audit_x = 10'000;        // exact-mode scans, capped at nmax
  unsigned threads = 1;
  ArithmeticFault fault;
};

struct VerifyCheck {
  std::string name;
  std::uint64_t cases = 0;
  std::uint64_t failures = 0;
  bool pass() const noexcept { return failures == 0; }
};

struct VerifyReport {
  std::vector<VerifyCheck> checks;
  bool pass = true;
  std::string counterexample;  // JSON object for the first failure, empty when all pass
};

/// Identities 1-4 for k = 1..kmax and the inverted form, all n in [2, nmax],
/// against every weight; the rearranged double sum; and exact-mode splitting
/// and partition checks on both built-in contexts (cyclotomic 4, x^3 + x + 1).
VerifyReport run_verify(const FactorSieve& sieve, const VerifyOptions& options);

std::string to_json(const VerifyReport& report);

}  // namespace artin
