#include <doctest.h>

#include <numeric>

#include "artin/error.hpp"
#include "artin/galois.hpp"
#include "artin/sieve.hpp"
#include "oracles.hpp"

using namespace artin;

namespace {

std::vector<std::string> labels(const GaloisContext& ctx) {
  std::vector<std::string> out;
  for (const auto& c : ctx.classes()) out.push_back(c.label);
  return out;
}

std::uint64_t total_size(const GaloisContext& ctx) {
  std::uint64_t s = 0;
  for (const auto& c : ctx.classes()) s += c.size;
  return s;
}

const FactorSieve& sieve_1e6() {
  static const FactorSieve s = FactorSieve::build(1'000'000, 2);
  return s;
}

}  // namespace

TEST_CASE("cyclotomic contexts") {
  const auto c4 = GaloisContext::cyclotomic(4);
  CHECK(labels(c4) == std::vector<std::string>{"1 mod 4", "3 mod 4"});
  CHECK(c4.group_order() == 2);
  CHECK(c4.ramified() == std::vector<std::uint32_t>{2});
  CHECK(c4.class_density("1 mod 4") == mpq_class(1, 2));
  CHECK(c4.class_density("3 mod 4") == mpq_class(1, 2));

  const auto c3 = GaloisContext::cyclotomic(3);
  CHECK(labels(c3) == std::vector<std::string>{"1 mod 3", "2 mod 3"});
  CHECK(c3.ramified() == std::vector<std::uint32_t>{3});

  const auto c12 = GaloisContext::cyclotomic(12);
  CHECK(c12.classes().size() == 4);
  CHECK(c12.group_order() == 4);
  CHECK(c12.ramified() == std::vector<std::uint32_t>{2, 3});

  // phi(k) by direct count.
  for (std::uint32_t k = 3; k <= 60; ++k) {
    std::uint64_t phi = 0;
    for (std::uint32_t r = 1; r <= k; ++r) phi += std::gcd(r, k) == 1;
    const auto ctx = GaloisContext::cyclotomic(k);
    REQUIRE(ctx.group_order() == phi);
    REQUIRE(total_size(ctx) == phi);
  }
  CHECK_THROWS_AS(GaloisContext::cyclotomic(2), Error);
}

TEST_CASE("splitting field contexts") {
  const auto s3 = GaloisContext::splitting_field({1, 1, 0, 1});
  CHECK(s3.group_order() == 6);
  CHECK(s3.ramified() == std::vector<std::uint32_t>{31});
  CHECK(s3.disc() == -31);
  REQUIRE(s3.classes().size() == 3);
  CHECK(s3.classes()[s3.class_index("1+1+1")].size == 1);
  CHECK(s3.classes()[s3.class_index("1+2")].size == 3);
  CHECK(s3.classes()[s3.class_index("3")].size == 2);
  CHECK(s3.class_density("3") == mpq_class(1, 3));
  CHECK(s3.class_density("1+1+1") == mpq_class(1, 6));
  CHECK(s3.class_index("2+1") == s3.class_index("1+2"));
  CHECK_THROWS_AS(s3.class_index("2+2"), Error);

  const auto s2 = GaloisContext::splitting_field({1, 0, 1});
  CHECK(labels(s2) == std::vector<std::string>{"1+1", "2"});
  CHECK(s2.group_order() == 2);
  CHECK(s2.ramified() == std::vector<std::uint32_t>{2});

  CHECK_THROWS_AS(GaloisContext::splitting_field({0, 0, -1, 1}), Error);
  CHECK_THROWS_AS(GaloisContext::splitting_field({1, 2}), Error);
  CHECK_THROWS_AS(GaloisContext::splitting_field({1, 1, 2}), Error);
  CHECK_THROWS_AS(GaloisContext::splitting_field({1, 0, 0, 0, 0, 0, 0, 1}), Error);

  // Class sizes sum to n! and there is one class per partition.
  const std::uint64_t partitions[] = {0, 0, 2, 3, 5, 7, 11};
  const IntPoly polys[] = {{}, {}, {1, 0, 1}, {1, 1, 0, 1}, {1, 1, 0, 0, 1}, {1, 1, 0, 0, 0, 1}, {1, 1, 0, 0, 0, 0, 1}};
  std::uint64_t fact = 1;
  for (int n = 2; n <= 6; ++n) {
    fact *= static_cast<std::uint64_t>(n);
    const auto ctx = GaloisContext::splitting_field(polys[n]);
    REQUIRE(ctx.group_order() == fact);
    REQUIRE(total_size(ctx) == fact);
    REQUIRE(ctx.classes().size() == partitions[n]);
  }
}

TEST_CASE("cycle labels") {
  CHECK(cycle_type_label({{1, 1}, {2, 1}}) == "1+2");
  CHECK(cycle_type_label({{1, 3}}) == "1+1+1");
  CHECK(cycle_type_label({{3, 1}}) == "3");
  CHECK(cycle_type_label({{1, 2}, {2, 2}}) == "1+1+2+2");
}

TEST_CASE("classify primes") {
  const auto c4 = GaloisContext::cyclotomic(4);
  CHECK(*c4.classify(5).class_index == c4.class_index("1 mod 4"));
  CHECK(*c4.classify(7).class_index == c4.class_index("3 mod 4"));
  CHECK(c4.classify(2).ramified());
  CHECK_THROWS_AS(c4.classify(9), Error);
  CHECK_THROWS_AS(c4.classify(1), Error);

  const auto s3 = GaloisContext::splitting_field({1, 1, 0, 1});
  CHECK(s3.classify(31).ramified());
  CHECK(*s3.classify(2).class_index == s3.class_index("3"));
  CHECK(*s3.classify(11).class_index == s3.class_index("1+2"));
  CHECK(oracle::count_roots({1, 1, 0, 1}, 2) == 0);

  // Cycle type by root count for the cubic: 0 roots -> 3, 1 -> 1+2, 3 -> 1+1+1.
  for (std::uint64_t p = 2; p < 3000; ++p) {
    if (!oracle::is_prime(p)) continue;
    const auto out = s3.classify(p);
    if (p == 31) {
      REQUIRE(out.ramified());
      continue;
    }
    const unsigned roots = oracle::count_roots({1, 1, 0, 1}, p);
    const char* expect = roots == 0 ? "3" : roots == 1 ? "1+2" : "1+1+1";
    REQUIRE(*out.class_index == s3.class_index(expect));
  }

  const auto c12 = GaloisContext::cyclotomic(12);
  for (std::uint64_t p = 5; p < 3000; ++p) {
    if (!oracle::is_prime(p)) continue;
    const auto& label = c12.classes()[*c12.classify(p).class_index].label;
    REQUIRE(label == std::to_string(p % 12) + " mod 12");
  }
}

TEST_CASE("parse specifiers") {
  CHECK(GaloisContext::parse("cyclotomic:4").modulus_k() == 4);
  CHECK(GaloisContext::parse("poly:1,1,0,1").polynomial() == IntPoly{1, 1, 0, 1});
  CHECK(GaloisContext::parse("poly:1,1,0,1").specifier() == "poly:1,1,0,1");
  CHECK(GaloisContext::cyclotomic(7).specifier() == "cyclotomic:7");
  CHECK_THROWS_AS(GaloisContext::parse("field:4"), Error);
  CHECK_THROWS_AS(GaloisContext::parse("cyclotomic:x"), Error);
}

TEST_CASE("class table over primes up to 10^6") {
  const auto& sieve = sieve_1e6();
  for (const auto& ctx : {GaloisContext::cyclotomic(4), GaloisContext::splitting_field({1, 1, 0, 1})}) {
    const ClassTable one(ctx, sieve, 1'000'000, 1);
    const ClassTable many(ctx, sieve, 1'000'000, 4);
    std::vector<std::uint64_t> counts(ctx.classes().size(), 0);
    std::uint64_t primes = 0, ramified = 0;
    for (std::uint64_t n = 0; n <= 1'000'000; ++n) {
      REQUIRE(one[n] == many[n]);
      if (n < 2 || !sieve.is_prime(n)) {
        REQUIRE(one[n] == -2);
        continue;
      }
      ++primes;
      const auto out = ctx.classify_unchecked(static_cast<std::uint32_t>(n));
      REQUIRE(one[n] == (out.ramified() ? -1 : static_cast<std::int32_t>(*out.class_index)));
      if (out.ramified())
        ++ramified;
      else
        ++counts[*out.class_index];
    }
    CHECK(ramified == ctx.ramified().size());
    for (std::size_t i = 0; i < counts.size(); ++i) {
      const double freq = static_cast<double>(counts[i]) / static_cast<double>(primes);
      CHECK(std::abs(freq - ctx.classes()[i].density.get_d()) <= 0.01);
    }
  }
}
