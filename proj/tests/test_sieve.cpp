#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "artin/error.hpp"
#include "artin/sieve.hpp"
#include "oracles.hpp"

using namespace artin;

namespace {

const FactorSieve& sieve_1e5() {
  static const FactorSieve s = FactorSieve::build(100'000, 2);
  return s;
}

std::filesystem::path temp_file(const char* name) { return std::filesystem::temp_directory_path() / name; }

}  // namespace

TEST_CASE("spf table for small limits") {
  const auto s = FactorSieve::build(10);
  const std::uint32_t expect[] = {2, 3, 2, 5, 2, 7, 2, 3, 2};
  for (std::uint64_t n = 2; n <= 10; ++n) CHECK(s.spf(n) == expect[n - 2]);

  const auto two = FactorSieve::build(2);
  CHECK(two.limit() == 2);
  CHECK(two.spf(2) == 2);
  CHECK_THROWS_AS(FactorSieve::build(1), Error);
}

TEST_CASE("large prime entry and prime count at 10^6") {
  const auto s = FactorSieve::build(1'000'000, 3);
  CHECK(oracle::is_prime(999'983));
  CHECK(s.spf(999'983) == 999'983);
  std::uint64_t count = 0;
  for (std::uint64_t n = 2; n <= 1'000'000; n += 1) count += s.is_prime(n);
  CHECK(count == 78'498);
  CHECK(s.prime_count(1'000'000) == 78'498);
}

TEST_CASE("build is independent of thread count") {
  const auto a = FactorSieve::build(300'001, 1);
  const auto b = FactorSieve::build(300'001, 4);
  for (std::uint64_t n = 2; n <= 300'001; ++n) REQUIRE(a.spf(n) == b.spf(n));
}

TEST_CASE("spf invariants against trial division") {
  const auto& s = sieve_1e5();
  for (std::uint64_t n = 2; n <= 100'000; ++n) {
    REQUIRE(s.spf(n) == oracle::smallest_prime(n));
    REQUIRE(s.is_prime(n) == oracle::is_prime(n));
  }
}

TEST_CASE("factorize") {
  const auto& s = sieve_1e5();
  CHECK(s.factorize(12) == Factorization{{2, 2}, {3, 1}});
  CHECK(s.factorize(1).empty());
  CHECK(s.factorize(2310) == Factorization{{2, 1}, {3, 1}, {5, 1}, {7, 1}, {11, 1}});
  CHECK_THROWS_AS(s.factorize(0), Error);
  CHECK_THROWS_AS(s.factorize(100'001), Error);

  for (std::uint64_t n = 1; n <= 100'000; ++n) {
    std::uint64_t prod = 1;
    for (auto [p, e] : s.factorize(n))
      for (std::uint32_t i = 0; i < e; ++i) prod *= p;
    REQUIRE(prod == n);
  }
}

TEST_CASE("arithmetic functions") {
  const auto& s = sieve_1e5();
  auto a = s.arith(12);
  CHECK(a.mu == 0);
  CHECK(a.omega == 2);
  CHECK(a.big_omega == 3);
  a = s.arith(21);
  CHECK(a.mu == 1);
  CHECK(a.omega == 2);
  CHECK(a.big_omega == 2);
  a = s.arith(1);
  CHECK(a.mu == 1);
  CHECK(a.omega == 0);
  CHECK(a.big_omega == 0);

  for (std::uint64_t n = 1; n <= 100'000; ++n) {
    REQUIRE(s.arith(n).mu == oracle::mu(n));
    REQUIRE(s.arith(n).omega == oracle::omega(n));
  }
}

TEST_CASE("prime extremes") {
  const auto& s = sieve_1e5();
  auto e = s.extremes(60);
  CHECK(e.p1 == 2);
  CHECK(e.P1 == 5);
  CHECK(e.P2_strict == 3);
  CHECK(e.P2_mult == 3);
  e = s.extremes(9);
  CHECK(e.p1 == 3);
  CHECK(e.P1 == 3);
  CHECK(e.P2_strict == 1);
  CHECK(e.P2_mult == 3);
  e = s.extremes(7);
  CHECK(e.P2_strict == 1);
  CHECK(e.P2_mult == 1);
  e = s.extremes(1);
  CHECK(e.p1 == 1);
  CHECK(e.P1 == 1);

  for (std::uint64_t n = 2; n <= 100'000; ++n) {
    const auto x = s.extremes(n);
    REQUIRE(x.P1 == oracle::largest_prime(n));
    REQUIRE(x.P2_strict == oracle::second_prime(n));
    REQUIRE(x.P2_mult == oracle::largest_prime(n / x.P1));
    if (!s.is_p1_repeated(n)) REQUIRE(x.P2_strict == x.P2_mult);
    REQUIRE(s.spf(n) <= x.P1);
    REQUIRE((s.spf(n) == x.P1) == (s.arith(n).omega == 1));
  }
}

TEST_CASE("repeated largest prime") {
  const auto& s = sieve_1e5();
  CHECK(s.is_p1_repeated(9));
  CHECK_FALSE(s.is_p1_repeated(12));
  CHECK(s.is_p1_repeated(50));
  CHECK_THROWS_AS(s.is_p1_repeated(1), Error);
  for (std::uint64_t n = 2; n <= 20'000; ++n) REQUIRE(s.is_p1_repeated(n) == oracle::largest_repeats(n));
}

TEST_CASE("prime iteration") {
  const auto& s = sieve_1e5();
  std::vector<std::uint32_t> got;
  for (auto p : s.primes_up_to(10)) got.push_back(p);
  CHECK(got == std::vector<std::uint32_t>{2, 3, 5, 7});
  got.clear();
  for (auto p : s.primes_up_to(2)) got.push_back(p);
  CHECK(got == std::vector<std::uint32_t>{2});
  CHECK(s.prime_count(100'000) == 9592);
}

TEST_CASE("cache file round trip and corruption") {
  const auto& s = sieve_1e5();
  const auto path = temp_file("artin_test_sieve.afs");
  s.save(path);
  const auto t = FactorSieve::load(path);
  CHECK(t.limit() == s.limit());
  for (std::uint64_t n = 2; n <= s.limit(); ++n) REQUIRE(t.spf(n) == s.spf(n));

  SUBCASE("bad magic") {
    std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(0);
    f.write("XXXX", 4);
    f.close();
    try {
      FactorSieve::load(path);
      FAIL("expected an integrity error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::Integrity);
    }
  }
  SUBCASE("truncated") {
    std::filesystem::resize_file(path, 100);
    try {
      FactorSieve::load(path);
      FAIL("expected an integrity error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::Integrity);
    }
  }
  SUBCASE("entries zeroed") {
    // Zero every entry; the spot checks must notice.
    std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(13);
    const std::vector<char> zeros(4 * (s.limit() - 1), 0);
    f.write(zeros.data(), static_cast<std::streamsize>(zeros.size()));
    f.close();
    try {
      FactorSieve::load(path);
      FAIL("expected an integrity error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::Integrity);
    }
  }
  SUBCASE("missing file") {
    try {
      FactorSieve::load(temp_file("artin_no_such_file.afs"));
      FAIL("expected an io error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::Io);
    }
  }
  std::filesystem::remove(path);
}
