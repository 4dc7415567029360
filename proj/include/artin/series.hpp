#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "artin/galois.hpp"
#include "artin/sieve.hpp"

namespace artin {

enum class SumKind {
  MuOmegaOverN,        // sum mu(n) w(n) / n
  MuOverN,             // sum mu(n) / n
  MuOmegaMinus1OverN,  // sum mu(n) (w(n) - 1) / n
  MuOmegaRaw,          // sum mu(n) w(n)
  FloorWeighted,       // sum mu(n) w(n) floor(x / n)
  FracWeighted,        // sum mu(n) w(n) {x / n}
};
inline constexpr std::array<SumKind, 6> kAllSumKinds = {
    SumKind::MuOmegaOverN, SumKind::MuOverN,       SumKind::MuOmegaMinus1OverN,
    SumKind::MuOmegaRaw,   SumKind::FloorWeighted, SumKind::FracWeighted};
std::string_view to_string(SumKind kind);
std::optional<SumKind> parse_sum_kind(std::string_view name);

enum class ScanMode { Exact, Compensated };
std::string_view to_string(ScanMode mode);
std::optional<ScanMode> parse_scan_mode(std::string_view name);

/// Neumaier-compensated double accumulator.
class NeumaierSum {
 public:
  void add(double v) noexcept {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v))
      comp_ += (sum_ - t) + v;
    else
      comp_ += (v - t) + sum_;
    sum_ = t;
  }
  void merge(const NeumaierSum& o) noexcept {
    add(o.sum_);
    add(o.comp_);
  }
  double value() const noexcept { return sum_ + comp_; }
  double raw_sum() const noexcept { return sum_; }
  double raw_comp() const noexcept { return comp_; }
  static NeumaierSum from_raw(double sum, double comp) noexcept {
    NeumaierSum s;
    s.sum_ = sum;
    s.comp_ = comp;
    return s;
  }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// One accumulated quantity. `exact` is meaningful when has_exact is set:
// always in exact mode, and for the integer-valued kinds in either mode.
struct ScanValue {
  double value = 0.0;
  bool has_exact = false;
  mpq_class exact = 0;
};

struct BucketValues {
  std::array<ScanValue, 6> kinds;  // indexed by SumKind
  std::int64_t mu_count = 0;       // sum mu(n), the unweighted Moebius sum
  const ScanValue& operator[](SumKind k) const { return kinds[static_cast<std::size_t>(k)]; }
  ScanValue& operator[](SumKind k) { return kinds[static_cast<std::size_t>(k)]; }
};

/// Every tracked quantity at one checkpoint x. Buckets route n by the
/// Frobenius class of p1(n); n whose p1 is ramified go to the slice of that
/// prime. `total` runs over all 2 <= n <= x independently of the buckets.
struct ScanSnapshot {
  std::uint64_t x = 0;
  std::vector<BucketValues> classes;   // parallel to ctx.classes()
  std::vector<BucketValues> ramified;  // parallel to ctx.ramified()
  BucketValues total;
  // Counts keyed by the class of P2(n) (strict), skipping n whose largest
  // prime factor repeats.
  std::vector<std::uint64_t> n2_class;
  std::uint64_t n2_ramified = 0;
  std::uint64_t n2_other = 0;   // w(n) <= 1 or P1(n)^2 | n
  std::uint64_t repeat_count = 0;  // n <= x with P1(n)^2 | n
};

struct ScanOptions {
  std::uint64_t x_max = 0;
  std::vector<std::uint64_t> checkpoints;  // strictly increasing, in [2, x_max]; empty means {x_max}
  ScanMode mode = ScanMode::Compensated;
  unsigned threads = 1;
  std::uint64_t range_size = 1u << 16;
  std::optional<std::filesystem::path> state_path;  // written after every batch of ranges
  bool resume = false;                              // continue from state_path
  std::optional<std::uint64_t> stop_after_ranges;   // halt early (interruption drill)
};

inline constexpr std::uint64_t kExactModeMaxX = 10'000;

class SeriesScan {
 public:
  SeriesScan(GaloisContext ctx, ScanOptions options, std::vector<ScanSnapshot> snapshots, bool complete)
      : ctx_(std::move(ctx)), options_(std::move(options)), snapshots_(std::move(snapshots)), complete_(complete) {}

  const GaloisContext& context() const noexcept { return ctx_; }
  const ScanOptions& options() const noexcept { return options_; }
  ScanMode mode() const noexcept { return options_.mode; }
  bool complete() const noexcept { return complete_; }
  const std::vector<ScanSnapshot>& snapshots() const noexcept { return snapshots_; }
  const ScanSnapshot& at(std::uint64_t x) const;

  /// Bucket by label: a class label, "ramified:<p>", or "total".
  const BucketValues& bucket(const ScanSnapshot& snap, std::string_view label) const;
  std::vector<std::string> bucket_labels(bool include_aux) const;

 private:
  GaloisContext ctx_;
  ScanOptions options_;
  std::vector<ScanSnapshot> snapshots_;
  bool complete_;
};

/// Single pass over 2 <= n <= x_max in fixed-size ranges, merged in ascending
/// order, so results are bitwise identical for any thread count.
/// Floor/frac-weighted sums are recomputed by a separate pass per checkpoint.
SeriesScan scan(const GaloisContext& ctx, const FactorSieve& sieve, const ScanOptions& options);

/// sum over n <= x with p1(n) = p of mu(n) w(n) / n.
double fixed_prime_slice(std::uint32_t p, std::uint64_t x, const FactorSieve& sieve);
mpq_class fixed_prime_slice_exact(std::uint32_t p, std::uint64_t x, const FactorSieve& sieve);

/// #{n <= x : class(P2(n)) = label, P1(n) not repeated}.
std::uint64_t count_p2_in_class(const GaloisContext& ctx, std::string_view label, std::uint64_t x,
                                const FactorSieve& sieve);

/// #{2 <= n <= x : P1(n)^2 | n}.
std::uint64_t count_repeated_p1(std::uint64_t x, const FactorSieve& sieve);

/// Psi(x, y) = #{n <= x : P1(n) <= y}, n = 1 included.
std::uint64_t psi_smooth(std::uint64_t x, std::uint64_t y, const FactorSieve& sieve);
/// Psi(x, y) for every y in [0, x] at once; entry [y].
std::vector<std::uint64_t> psi_profile(std::uint64_t x, const FactorSieve& sieve);

/// #{n <= x : P2(n) <= y}, strict P2, n = 1 included.
std::uint64_t count_p2_below(std::uint64_t x, std::uint64_t y, const FactorSieve& sieve);

/// Dickman's rho on [0, 20].
double dickman_rho(double alpha);

/// sum over n <= x with class(p1(n)) = label of mu(n).
std::int64_t sum_mu_in_class(const GaloisContext& ctx, std::string_view label, std::uint64_t x,
                             const FactorSieve& sieve);

struct AuditLine {
  std::uint64_t x;
  SumKind kind;
  double parts;        // sum over class buckets and ramified slices
  double whole;        // the unconditional sum
  double discrepancy;  // |parts - whole| / max(|whole|, tiny); exactly 0 when equal in exact mode
  bool pass;
};

struct AuditReport {
  std::vector<AuditLine> lines;
  double worst = 0.0;
  bool pass = true;
};

/// Class buckets plus ramified slices against the unconditional sum, for every
/// kind at every checkpoint. Exact equality in exact mode, rel_tol otherwise.
/// Throws Integrity carrying the worst discrepancy on failure.
AuditReport partition_audit(const SeriesScan& scan, double rel_tol = 1e-12);

struct SplittingLine {
  std::uint64_t x;
  std::string bucket;
  bool floor_frac_ok;  // floor_sum + frac_sum = x * mu_omega_sum
  bool kinds_ok;       // MuOmegaMinus1OverN = MuOmegaOverN - MuOverN
  double worst;        // relative residual (0 in exact mode when equal)
};

/// Per-bucket algebraic checks on a completed scan.
std::vector<SplittingLine> check_splitting(const SeriesScan& scan, double rel_tol = 1e-12);

}  // namespace artin
