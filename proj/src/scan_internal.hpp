#pragma once

// Running state of a scan between range boundaries; shared by the scan loop
// and the state-file reader/writer.

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

#include <gmpxx.h>

#include "artin/series.hpp"

namespace artin::detail {

// Per-bucket accumulators for the three 1/n-weighted kinds.
inline constexpr std::size_t kWeightedKinds = 3;

struct RunBucket {
  std::array<NeumaierSum, kWeightedKinds> approx{};
  std::array<mpq_class, kWeightedKinds> exact{0, 0, 0};
  std::int64_t mu_omega_raw = 0;
  std::int64_t mu_count = 0;

  void merge(const RunBucket& o, bool exact_mode) {
    for (std::size_t i = 0; i < kWeightedKinds; ++i) {
      if (exact_mode)
        exact[i] += o.exact[i];
      else
        approx[i].merge(o.approx[i]);
    }
    mu_omega_raw += o.mu_omega_raw;
    mu_count += o.mu_count;
  }
};

struct RunState {
  std::vector<RunBucket> buckets;  // classes, then ramified primes, then total
  std::vector<std::uint64_t> n2_class;
  std::uint64_t n2_ramified = 0;
  std::uint64_t n2_other = 0;
  std::uint64_t repeat_count = 0;
  std::uint64_t next_n = 2;
  std::uint64_t ranges_done = 0;
  std::vector<ScanSnapshot> snapshots;
};

void write_state(const std::filesystem::path& path, const GaloisContext& ctx, const ScanOptions& opt,
                 const RunState& state);
// Validates the header against ctx/opt and the trailing hash; throws Integrity.
RunState read_state(const std::filesystem::path& path, const GaloisContext& ctx, const ScanOptions& opt);

std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace artin::detail
