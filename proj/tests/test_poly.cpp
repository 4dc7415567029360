#include <doctest.h>

#include <random>

#include "artin/error.hpp"
#include "artin/numtheory.hpp"
#include "artin/poly.hpp"
#include "oracles.hpp"

using namespace artin;

namespace {

const IntPoly kCubic = {1, 1, 0, 1};  // x^3 + x + 1

PolyModP P(std::uint32_t p, std::vector<std::uint32_t> c) { return PolyModP(p, std::move(c)); }

oracle::Poly as_oracle(const PolyModP& f) { return oracle::Poly(f.coeffs().begin(), f.coeffs().end()); }

std::vector<std::uint32_t> small_primes(std::uint32_t bound) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t p = 2; p <= bound; ++p)
    if (oracle::is_prime(p)) out.push_back(p);
  return out;
}

}  // namespace

TEST_CASE("parse and format integer polynomials") {
  CHECK(parse_int_poly("1,1,0,1") == kCubic);
  CHECK(parse_int_poly(" 62, -31 ,0,1") == IntPoly{62, -31, 0, 1});
  CHECK(is_monic(kCubic));
  CHECK_FALSE(is_monic({1, 2}));
  CHECK(format_int_poly(kCubic) == "1,1,0,1");
  CHECK_THROWS_AS(parse_int_poly("1,,2"), Error);
  CHECK_THROWS_AS(parse_int_poly("x"), Error);
}

TEST_CASE("reduce") {
  CHECK(reduce(kCubic, 2).coeffs() == std::vector<std::uint32_t>{1, 1, 0, 1});
  CHECK(reduce(kCubic, 31).coeffs() == std::vector<std::uint32_t>{1, 1, 0, 1});
  CHECK(reduce({62, -31, 0, 1}, 31).coeffs() == std::vector<std::uint32_t>{0, 0, 0, 1});
  CHECK(reduce({-1, 0, 1}, 7).coeffs() == std::vector<std::uint32_t>{6, 0, 1});
  CHECK_THROWS_AS(reduce({1, 1, 2}, 5), Error);
}

TEST_CASE("powmod_x") {
  const auto f = reduce(kCubic, 2);
  CHECK(powmod_x(f, 2) == P(2, {0, 0, 1}));
  // x generates F_8^*, so x^7 = 1 and x^8 = x.
  CHECK(powmod_x(f, 7) == PolyModP::one(2));
  CHECK(powmod_x(f, 8) == P(2, {0, 1}));
  CHECK(powmod_x(f, 0) == PolyModP::one(2));

  // Against repeated long division by the oracle.
  for (std::uint32_t p : {5u, 13u, 97u}) {
    const auto g = reduce({3, 0, 7, 1, 1}, p);
    oracle::Poly xe = {1};
    for (std::uint64_t e = 0; e < 60; ++e) {
      REQUIRE(as_oracle(powmod_x(g, e)) == oracle::rem(xe, as_oracle(g), p));
      xe.insert(xe.begin(), 0);
      xe = oracle::rem(xe, as_oracle(g), p);
    }
  }
}

TEST_CASE("gcd") {
  const auto f = P(7, {3, 2, 0, 2});  // non-monic
  CHECK(gcd(f, PolyModP::zero(7)) == make_monic(f));
  CHECK(gcd(P(5, {4, 0, 1}), P(5, {4, 1})) == P(5, {4, 1}));

  const auto c11 = reduce(kCubic, 11);
  const auto x11 = sub(powmod_x(c11, 11), PolyModP::x(11));
  CHECK(gcd(c11, x11) == P(11, {9, 1}));
  CHECK(oracle::eval({1, 1, 0, 1}, 2, 11) == 0);

  CHECK_THROWS_AS(gcd(P(5, {1, 1}), P(7, {1, 1})), Error);
}

TEST_CASE("distinct-degree factorization of the test cubic") {
  CHECK(distinct_degree_factorization(reduce(kCubic, 2)) == FactorShape{{3, 1}});
  CHECK(distinct_degree_factorization(reduce(kCubic, 11)) == FactorShape{{1, 1}, {2, 1}});
  try {
    distinct_degree_factorization(reduce(kCubic, 31));
    FAIL("expected not-squarefree");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotSquarefree);
  }
  // No roots mod 2, so degree 3 forces irreducibility.
  CHECK(oracle::count_roots({1, 1, 0, 1}, 2) == 0);
  CHECK(oracle::factor_degrees({1, 1, 0, 1}, 11) == std::map<unsigned, unsigned>{{1, 1}, {2, 1}});
}

TEST_CASE("random cubics and quartics against exhaustive factorization") {
  std::mt19937_64 rng(20240601);
  const auto primes = small_primes(97);
  int tested = 0;
  while (tested < 200) {
    const std::uint32_t p = primes[rng() % primes.size()];
    const unsigned deg = 3 + static_cast<unsigned>(rng() % 2);
    std::vector<std::uint32_t> c(deg + 1);
    for (unsigned i = 0; i < deg; ++i) c[i] = static_cast<std::uint32_t>(rng() % p);
    c[deg] = 1;
    const PolyModP f(p, c);
    if (!gcd(f, derivative(f)).is_one()) {
      CHECK_THROWS_AS(distinct_degree_factorization(f), Error);
      continue;
    }
    const auto shape = distinct_degree_factorization(f);
    const auto expect = oracle::factor_degrees(as_oracle(f), p);
    unsigned total = 0;
    std::map<unsigned, unsigned> got;
    for (auto [d, m] : shape) {
      got[d] = m;
      total += d * m;
    }
    REQUIRE(got == expect);
    CHECK(total == deg);
    ++tested;
  }
}

TEST_CASE("root counts against evaluation") {
  CHECK(count_roots(reduce(kCubic, 2)) == 0);
  CHECK(count_roots(reduce(kCubic, 11)) == 1);
  CHECK(count_roots(reduce({-1, 0, 1}, 7)) == 2);

  std::mt19937_64 rng(7);
  for (std::uint32_t p : small_primes(97)) {
    for (int trial = 0; trial < 10; ++trial) {
      std::vector<std::uint32_t> c(4);
      for (int i = 0; i < 3; ++i) c[i] = static_cast<std::uint32_t>(rng() % p);
      c[3] = 1;
      const PolyModP f(p, c);
      REQUIRE(count_roots(f) == oracle::count_roots(as_oracle(f), p));
    }
  }
}

TEST_CASE("discriminants") {
  CHECK(discriminant(kCubic) == -31);
  CHECK(discriminant({1, 0, 1}) == -4);
  CHECK(discriminant({-1, 0, 1}) == 4);
  CHECK(discriminant({0, 0, -1, 1}) == 0);
  // x^3 + px + q: -4p^3 - 27q^2.
  CHECK(discriminant({5, -2, 0, 1}) == -4 * (-8) - 27 * 25);
  // Quartic with roots 0, 1, 2, 3: product of squared differences is 144.
  CHECK(discriminant({0, -6, 11, -6, 1}) == 144);

  const mpz_class d = discriminant(kCubic);
  for (std::uint32_t p = 2; p <= 10'000; ++p) {
    if (!is_prime_u64(p)) continue;
    const auto f = reduce(kCubic, p);
    const bool divides = mpz_divisible_ui_p(d.get_mpz_t(), p) != 0;
    REQUIRE(divides == !gcd(f, derivative(f)).is_one());
  }
}
