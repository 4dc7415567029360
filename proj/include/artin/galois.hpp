#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "artin/poly.hpp"

namespace artin {

struct ConjugacyClassSpec {
  std::string label;   // "r mod k", or a cycle type such as "1+2"
  std::uint64_t size;  // |C|
  mpq_class density;   // |C| / |G|, exact
};

// Index into the context's class table, or none for a ramified prime.
struct ClassOutcome {
  std::optional<std::size_t> class_index;
  bool ramified() const noexcept { return !class_index.has_value(); }
  bool operator==(const ClassOutcome&) const = default;
};

/// A computable description of a Galois extension K/Q.
///
/// Two families are supported: cyclotomic fields Q(zeta_k), whose Frobenius
/// at p is the residue p mod k, and splitting fields of a monic integer
/// polynomial whose Galois group is the full symmetric group S_n (declared by
/// the caller, not verified). For the latter the Frobenius class is read off
/// the degree pattern of f mod p.
///
/// Ramification is tested against the polynomial discriminant. A prime that
/// divides disc(f) but is unramified in K is still reported as ramified; only
/// finitely many primes are affected and each fixed-prime slice of the main
/// series tends to zero on its own.
class GaloisContext {
 public:
  enum class Kind { Cyclotomic, SplittingField };

  static GaloisContext cyclotomic(std::uint32_t k);
  static GaloisContext splitting_field(const IntPoly& f);

  /// Accepts "cyclotomic:K" or "poly:c0,c1,...,1".
  static GaloisContext parse(std::string_view spec);
  std::string specifier() const;

  Kind kind() const noexcept { return kind_; }
  std::uint32_t modulus_k() const noexcept { return k_; }
  const IntPoly& polynomial() const noexcept { return f_; }
  const mpz_class& disc() const noexcept { return disc_; }

  const std::vector<ConjugacyClassSpec>& classes() const noexcept { return classes_; }
  std::uint64_t group_order() const noexcept { return group_order_; }
  // Ramified primes below 2^32, ascending.
  const std::vector<std::uint32_t>& ramified() const noexcept { return ramified_; }

  /// Frobenius class of the prime p. Throws InvalidArgument when p is not prime.
  ClassOutcome classify(std::uint64_t p) const;
  // Same without the primality check, for callers iterating a sieve.
  ClassOutcome classify_unchecked(std::uint32_t p) const;

  /// Looks up a class by label; cycle-type labels match in any part order.
  std::optional<std::size_t> find_class(std::string_view label) const;
  std::size_t class_index(std::string_view label) const;  // throws if unknown
  mpq_class class_density(std::string_view label) const;

 private:
  GaloisContext() = default;

  Kind kind_ = Kind::Cyclotomic;
  std::uint32_t k_ = 0;
  IntPoly f_;
  mpz_class disc_;
  std::vector<ConjugacyClassSpec> classes_;
  std::vector<std::int32_t> residue_to_class_;  // cyclotomic lookup, -1 when gcd(r,k) > 1
  std::uint64_t group_order_ = 0;
  std::vector<std::uint32_t> ramified_;
};

// Cycle-type label for a factor shape: parts ascending, e.g. {(1,1),(2,1)} -> "1+2".
std::string cycle_type_label(const FactorShape& shape);

/// Class index for every prime <= x (entry -1 = ramified, -2 = not prime),
/// indexed by the integer itself. Built with `threads` workers.
class ClassTable {
 public:
  ClassTable(const GaloisContext& ctx, const class FactorSieve& sieve, std::uint64_t x, unsigned threads = 1);
  std::int32_t operator[](std::uint64_t p) const noexcept { return table_[p]; }
  std::uint64_t bound() const noexcept { return table_.size() - 1; }

 private:
  std::vector<std::int16_t> table_;
};

}  // namespace artin
