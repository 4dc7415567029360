#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include <gmpxx.h>

#include "artin/sieve.hpp"

namespace artin {

class GaloisContext;

/// A rational-valued function on the primes, extended by f(1) = 0.
/// Values at composite arguments are never requested by the identities.
class PrimeWeight {
 public:
  using Rule = std::function<mpq_class(std::uint32_t prime)>;

  PrimeWeight(std::string name, Rule rule) : name_(std::move(name)), rule_(std::move(rule)) {}

  // Bounded pseudorandom rationals a/b, |a| <= 6, 1 <= b <= 7, fixed by seed.
  static PrimeWeight random(std::uint64_t seed);
  static PrimeWeight constant(const mpq_class& value);
  // Indicator of the primes whose Frobenius lies in the given class.
  static PrimeWeight class_indicator(const GaloisContext& ctx, std::size_t class_index);

  mpq_class operator()(std::uint64_t m) const;
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
  Rule rule_;
};

// The four divisor-sum identities exchanging smallest and k-th largest prime
// factors, plus the Moebius-inverted form of identity 4 at k = 2.
enum class Identity {
  LargestK = 1,        // sum mu(d) f(P_k(d)) = (-1)^k C(w(n)-1, k-1) f(p_1(n))
  SmallestK = 2,       // sum mu(d) f(p_k(d)) = (-1)^k C(w(n)-1, k-1) f(P_1(n))
  BinomLargest = 3,    // sum mu(d) C(w(d)-1, k-1) f(P_1(d)) = (-1)^k f(p_k(n))
  BinomSmallest = 4,   // sum mu(d) C(w(d)-1, k-1) f(p_1(d)) = (-1)^k f(P_k(n))
  Inversion = 5,       // mu(n)(w(n)-1) f(p_1(n)) = sum mu(n/d) f(P_2(d))
};

struct IdentityReport {
  std::uint64_t n;
  Identity identity;
  unsigned k;
  mpq_class lhs;
  mpq_class rhs;
  bool pass;
};

// Test hook: flips the sign of mu at one argument wherever the kernel
// evaluates mu, to show that the checks catch a faulty arithmetic source.
struct ArithmeticFault {
  std::optional<std::uint64_t> flip_mu_at;
};

/// Generalized binomial with C(-1, 0) = 1 and C(-1, j) = 0 for j >= 1.
mpz_class binomial_ext(long top, unsigned bottom);

/// k-th largest / k-th smallest distinct prime factor, 1 when w(n) < k.
std::uint32_t kth_largest_prime(const Factorization& f, unsigned k);
std::uint32_t kth_smallest_prime(const Factorization& f, unsigned k);

/// Left-hand side of identities 1-4 by full divisor enumeration of n.
mpq_class divisor_sum(std::uint64_t n, unsigned k, Identity id, const PrimeWeight& f,
                      const FactorSieve& sieve, const ArithmeticFault& fault = {});
/// The closed-form right-hand side of identities 1-4.
mpq_class identity_rhs(std::uint64_t n, unsigned k, Identity id, const PrimeWeight& f,
                       const FactorSieve& sieve);

IdentityReport check_identity(std::uint64_t n, unsigned k, Identity id, const PrimeWeight& f,
                              const FactorSieve& sieve, const ArithmeticFault& fault = {});
IdentityReport check_inversion(std::uint64_t n, const PrimeWeight& f, const FactorSieve& sieve,
                               const ArithmeticFault& fault = {});

struct RearrangementReport {
  std::uint64_t x;
  mpq_class by_n;      // sum_{n<=x} sum_{d|n} mu(n/d) f(P_2(d))
  mpq_class by_m;      // sum_{m<=x} mu(m) sum_{d<=x/m} f(P_2(d))
  bool pass;
};

/// Double-counting check behind the hyperbola split of the inverted identity.
RearrangementReport check_rearrangement(std::uint64_t x, const PrimeWeight& f, const FactorSieve& sieve);

}  // namespace artin
