#pragma once

#include <cstdint>
#include <filesystem>
#include <iterator>
#include <vector>

namespace artin {

struct PrimePower {
  std::uint32_t prime;
  std::uint32_t exponent;
  bool operator==(const PrimePower&) const = default;
};

// Primes strictly increasing, exponents >= 1. Empty for n = 1.
using Factorization = std::vector<PrimePower>;

struct ArithValues {
  int mu;
  unsigned omega;
  unsigned big_omega;
};

// p1 / P1 are the smallest / largest prime factor. P2_strict is the largest
// prime factor strictly below P1; P2_mult is P1(n / P1(n)). Every missing
// factor is reported as 1.
struct PrimeExtremes {
  std::uint32_t p1;
  std::uint32_t P1;
  std::uint32_t P2_strict;
  std::uint32_t P2_mult;
};

// Everything a scan needs about one n, gathered in a single walk of the
// smallest-prime-factor chain.
struct FactorProfile {
  int mu;
  unsigned omega;
  unsigned big_omega;
  std::uint32_t p1;
  std::uint32_t P1;
  std::uint32_t P2_strict;
  std::uint32_t P2_mult;
  bool p1_repeated;  // P1(n)^2 divides n
};

/// Smallest-prime-factor table for every n in [2, limit].
///
/// Storage is 4 bytes per entry (about 40 MB at the default limit of 10^7);
/// limits are capped at 2^32 - 1 so every entry fits an unsigned 32-bit word.
/// The table is immutable once built and safe to share between threads.
class FactorSieve {
 public:
  static constexpr std::uint64_t kDefaultLimit = 10'000'000;
  static constexpr std::uint64_t kMaxLimit = 0xFFFF'FFFFull;

  /// Segmented Eratosthenes recording the first (smallest) prime to strike
  /// each entry. Content is independent of `threads`.
  static FactorSieve build(std::uint64_t limit, unsigned threads = 1);

  /// Reads an "AFS1" cache file; validates header and spot-checks entries.
  static FactorSieve load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;

  std::uint64_t limit() const noexcept { return limit_; }
  std::uint32_t spf(std::uint64_t n) const;
  bool is_prime(std::uint64_t n) const;

  Factorization factorize(std::uint64_t n) const;
  ArithValues arith(std::uint64_t n) const;
  PrimeExtremes extremes(std::uint64_t n) const;
  bool is_p1_repeated(std::uint64_t n) const;
  FactorProfile profile(std::uint64_t n) const;

  // Unchecked variant for hot loops; caller guarantees 1 <= n <= limit.
  FactorProfile profile_unchecked(std::uint64_t n) const noexcept;

  class PrimeIterator {
   public:
    using iterator_category = std::forward_iterator_tag;
    using value_type = std::uint32_t;
    using difference_type = std::ptrdiff_t;
    using pointer = const std::uint32_t*;
    using reference = std::uint32_t;

    PrimeIterator() = default;
    PrimeIterator(const FactorSieve* sieve, std::uint64_t n, std::uint64_t end)
        : sieve_(sieve), n_(n), end_(end) { skip(); }
    std::uint32_t operator*() const { return static_cast<std::uint32_t>(n_); }
    PrimeIterator& operator++() { ++n_; skip(); return *this; }
    PrimeIterator operator++(int) { auto t = *this; ++*this; return t; }
    bool operator==(const PrimeIterator& o) const { return n_ == o.n_; }

   private:
    void skip() {
      while (n_ < end_ && sieve_->spf_[n_] != n_) ++n_;
    }
    const FactorSieve* sieve_ = nullptr;
    std::uint64_t n_ = 0;
    std::uint64_t end_ = 0;
  };

  struct PrimeRange {
    PrimeIterator first, last;
    PrimeIterator begin() const { return first; }
    PrimeIterator end() const { return last; }
  };

  /// Strictly increasing primes <= x.
  PrimeRange primes_up_to(std::uint64_t x) const;
  std::uint64_t prime_count(std::uint64_t x) const;

 private:
  FactorSieve() = default;
  void check_range(std::uint64_t n, std::uint64_t lo) const;

  std::uint64_t limit_ = 0;
  std::vector<std::uint32_t> spf_;  // indexed by n; entries 0 and 1 unused
};

}  // namespace artin
