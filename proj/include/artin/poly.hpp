#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace artin {

// Integer polynomial, coefficients lowest degree first.
using IntPoly = std::vector<std::int64_t>;

// Parses "c0,c1,...,cn" (lowest degree first), e.g. "1,1,0,1" = x^3 + x + 1.
IntPoly parse_int_poly(std::string_view text);
std::string format_int_poly(const IntPoly& f);
bool is_monic(const IntPoly& f);

/// Dense polynomial over F_p, p prime below 2^31. Coefficients are kept
/// reduced and trimmed, so degree() is exact; the zero polynomial has
/// degree -1.
class PolyModP {
 public:
  static constexpr std::uint64_t kMaxModulus = 1ull << 31;

  PolyModP(std::uint32_t p, std::vector<std::uint32_t> coeffs);
  static PolyModP zero(std::uint32_t p) { return PolyModP(p, {}); }
  static PolyModP one(std::uint32_t p) { return PolyModP(p, {1}); }
  static PolyModP x(std::uint32_t p) { return PolyModP(p, {0, 1}); }

  std::uint32_t modulus() const noexcept { return p_; }
  const std::vector<std::uint32_t>& coeffs() const noexcept { return c_; }
  int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const noexcept { return c_.empty(); }
  bool is_one() const noexcept { return c_.size() == 1 && c_[0] == 1; }
  std::uint32_t lead() const noexcept { return c_.empty() ? 0 : c_.back(); }
  std::uint32_t operator()(std::uint32_t x) const;  // evaluation

  bool operator==(const PolyModP&) const = default;

 private:
  void trim();
  std::uint32_t p_;
  std::vector<std::uint32_t> c_;
};

// (degree, count) pairs, degrees strictly increasing, counts >= 1.
using FactorShape = std::vector<std::pair<unsigned, unsigned>>;

/// f mod p for monic integer f.
PolyModP reduce(const IntPoly& f, std::uint32_t p);

PolyModP add(const PolyModP& a, const PolyModP& b);
PolyModP sub(const PolyModP& a, const PolyModP& b);
PolyModP mul(const PolyModP& a, const PolyModP& b);
PolyModP derivative(const PolyModP& a);
PolyModP make_monic(const PolyModP& a);
// Quotient and remainder; b must be nonzero.
std::pair<PolyModP, PolyModP> divmod(const PolyModP& a, const PolyModP& b);
PolyModP rem(const PolyModP& a, const PolyModP& b);
PolyModP mulmod(const PolyModP& a, const PolyModP& b, const PolyModP& f);
PolyModP powmod(const PolyModP& base, std::uint64_t e, const PolyModP& f);

/// x^e reduced mod f over F_p (deg f >= 1).
PolyModP powmod_x(const PolyModP& f, std::uint64_t e);

/// Monic gcd; gcd(a, 0) = monic(a). Moduli must agree.
PolyModP gcd(const PolyModP& a, const PolyModP& b);

/// Multiset of irreducible-factor degrees of a monic squarefree f, by
/// stripping gcd(f, x^(p^d) - x) for d = 1, 2, ... Throws NotSquarefree when
/// gcd(f, f') != 1.
FactorShape distinct_degree_factorization(const PolyModP& f);

/// Number of distinct roots in F_p: deg gcd(f, x^p - x).
unsigned count_roots(const PolyModP& f);

/// Discriminant of a monic integer polynomial of degree >= 2, as
/// (-1)^(n(n-1)/2) Res(f, f').
mpz_class discriminant(const IntPoly& f);

}  // namespace artin
