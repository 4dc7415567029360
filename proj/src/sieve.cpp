#include "artin/sieve.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstring>
#include <fstream>
#include <new>
#include <random>
#include <thread>

#include "artin/error.hpp"
#include "artin/numtheory.hpp"

namespace artin {

namespace {

constexpr std::uint64_t kSegment = 1u << 18;
constexpr std::array<char, 4> kMagic = {'A', 'F', 'S', '1'};
constexpr std::uint8_t kCacheVersion = 1;

std::vector<std::uint32_t> small_primes(std::uint64_t bound) {
  std::vector<char> composite(bound + 1, 0);
  std::vector<std::uint32_t> out;
  for (std::uint64_t i = 2; i <= bound; ++i) {
    if (composite[i]) continue;
    out.push_back(static_cast<std::uint32_t>(i));
    for (std::uint64_t j = i * i; j <= bound; j += i) composite[j] = 1;
  }
  return out;
}

void sieve_segment(std::uint32_t* spf, std::uint64_t lo, std::uint64_t hi,
                   const std::vector<std::uint32_t>& base) {
  // Primes are visited in increasing order, so the first prime to strike an
  // entry is its smallest factor.
  for (std::uint32_t p : base) {
    const std::uint64_t pp = std::uint64_t{p} * p;
    if (pp > hi) break;
    std::uint64_t start = std::max(pp, (lo + p - 1) / p * p);
    for (std::uint64_t j = start; j <= hi; j += p) {
      if (spf[j] == 0) spf[j] = p;
    }
  }
  for (std::uint64_t n = lo; n <= hi; ++n) {
    if (spf[n] == 0) spf[n] = static_cast<std::uint32_t>(n);
  }
}

}  // namespace

FactorSieve FactorSieve::build(std::uint64_t limit, unsigned threads) {
  require(limit >= 2, "sieve limit must be at least 2");
  if (limit > kMaxLimit) fail(ErrorCode::Resource, "sieve limit exceeds 2^32 - 1");

  FactorSieve s;
  s.limit_ = limit;
  try {
    s.spf_.assign(limit + 1, 0);
  } catch (const std::bad_alloc&) {
    fail(ErrorCode::Resource, "cannot allocate sieve of " + std::to_string(limit) + " entries");
  }

  const auto root = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(limit))) + 1;
  const auto base = small_primes(root);
  const std::uint64_t segments = (limit - 2) / kSegment + 1;

  std::atomic<std::uint64_t> next{0};
  auto worker = [&] {
    for (std::uint64_t i; (i = next.fetch_add(1)) < segments;) {
      const std::uint64_t lo = 2 + i * kSegment;
      const std::uint64_t hi = std::min(limit, lo + kSegment - 1);
      sieve_segment(s.spf_.data(), lo, hi, base);
    }
  };
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(segments)));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return s;
}

void FactorSieve::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::Io, "cannot open " + path.string() + " for writing");
  out.write(kMagic.data(), kMagic.size());
  out.put(static_cast<char>(kCacheVersion));
  std::array<unsigned char, 8> lim{};
  for (int i = 0; i < 8; ++i) lim[i] = static_cast<unsigned char>(limit_ >> (8 * i));
  out.write(reinterpret_cast<const char*>(lim.data()), lim.size());
  // Entries for n = 2..limit, little-endian.
  std::vector<unsigned char> buf;
  buf.reserve(4 * kSegment);
  for (std::uint64_t n = 2; n <= limit_; ++n) {
    const std::uint32_t v = spf_[n];
    buf.push_back(static_cast<unsigned char>(v));
    buf.push_back(static_cast<unsigned char>(v >> 8));
    buf.push_back(static_cast<unsigned char>(v >> 16));
    buf.push_back(static_cast<unsigned char>(v >> 24));
    if (buf.size() >= 4 * kSegment) {
      out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
      buf.clear();
    }
  }
  out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  if (!out) fail(ErrorCode::Io, "write failed for " + path.string());
}

FactorSieve FactorSieve::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::Io, "cannot open sieve cache " + path.string());
  std::array<char, 4> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) fail(ErrorCode::Integrity, "bad sieve cache magic in " + path.string());
  const int version = in.get();
  if (version != kCacheVersion) fail(ErrorCode::Integrity, "unsupported sieve cache version");
  std::array<unsigned char, 8> lim{};
  in.read(reinterpret_cast<char*>(lim.data()), lim.size());
  if (!in) fail(ErrorCode::Integrity, "truncated sieve cache header");
  std::uint64_t limit = 0;
  for (int i = 0; i < 8; ++i) limit |= std::uint64_t{lim[i]} << (8 * i);
  if (limit < 2 || limit > kMaxLimit) fail(ErrorCode::Integrity, "sieve cache limit out of range");

  FactorSieve s;
  s.limit_ = limit;
  try {
    s.spf_.assign(limit + 1, 0);
  } catch (const std::bad_alloc&) {
    fail(ErrorCode::Resource, "cannot allocate sieve of " + std::to_string(limit) + " entries");
  }
  std::vector<unsigned char> buf(4 * kSegment);
  std::uint64_t n = 2;
  while (n <= limit) {
    const std::uint64_t count = std::min<std::uint64_t>(kSegment, limit - n + 1);
    in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(4 * count));
    if (!in) fail(ErrorCode::Integrity, "truncated sieve cache body");
    for (std::uint64_t i = 0; i < count; ++i, ++n) {
      const unsigned char* b = &buf[4 * i];
      s.spf_[n] = std::uint32_t{b[0]} | std::uint32_t{b[1]} << 8 | std::uint32_t{b[2]} << 16 |
                  std::uint32_t{b[3]} << 24;
    }
  }

  std::mt19937_64 rng(limit);
  std::uniform_int_distribution<std::uint64_t> pick(2, limit);
  for (int i = 0; i < 16; ++i) {
    const std::uint64_t m = pick(rng);
    const std::uint32_t p = s.spf_[m];
    if (p < 2 || m % p != 0 || !is_prime_u64(p))
      fail(ErrorCode::Integrity, "sieve cache spot check failed at n=" + std::to_string(m));
  }
  return s;
}

void FactorSieve::check_range(std::uint64_t n, std::uint64_t lo) const {
  if (n < lo || n > limit_)
    fail(ErrorCode::InvalidArgument,
         "n=" + std::to_string(n) + " outside [" + std::to_string(lo) + ", " + std::to_string(limit_) + "]");
}

std::uint32_t FactorSieve::spf(std::uint64_t n) const {
  check_range(n, 2);
  return spf_[n];
}

bool FactorSieve::is_prime(std::uint64_t n) const {
  check_range(n, 1);
  return n >= 2 && spf_[n] == n;
}

Factorization FactorSieve::factorize(std::uint64_t n) const {
  check_range(n, 1);
  Factorization f;
  while (n > 1) {
    const std::uint32_t p = spf_[n];
    std::uint32_t e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    f.push_back({p, e});
  }
  return f;
}

FactorProfile FactorSieve::profile_unchecked(std::uint64_t n) const noexcept {
  FactorProfile r{1, 0, 0, 1, 1, 1, 1, false};
  if (n < 2) return r;
  r.p1 = spf_[n];
  std::uint32_t prev = 1;  // largest distinct prime before the current one
  std::uint32_t last = 1, last_exp = 0;
  while (n > 1) {
    const std::uint32_t p = spf_[n];
    std::uint32_t e = 0;
    do {
      n /= p;
      ++e;
    } while (n % p == 0);
    ++r.omega;
    r.big_omega += e;
    if (e > 1) r.mu = 0;
    prev = last;
    last = p;
    last_exp = e;
  }
  if (r.mu != 0) r.mu = (r.omega % 2) ? -1 : 1;
  r.P1 = last;
  r.P2_strict = prev;
  r.p1_repeated = last_exp > 1;
  r.P2_mult = r.p1_repeated ? last : prev;
  return r;
}

FactorProfile FactorSieve::profile(std::uint64_t n) const {
  check_range(n, 1);
  return profile_unchecked(n);
}

ArithValues FactorSieve::arith(std::uint64_t n) const {
  const auto p = profile(n);
  return {p.mu, p.omega, p.big_omega};
}

PrimeExtremes FactorSieve::extremes(std::uint64_t n) const {
  const auto p = profile(n);
  return {p.p1, p.P1, p.P2_strict, p.P2_mult};
}

bool FactorSieve::is_p1_repeated(std::uint64_t n) const {
  check_range(n, 2);
  return profile_unchecked(n).p1_repeated;
}

FactorSieve::PrimeRange FactorSieve::primes_up_to(std::uint64_t x) const {
  if (x > limit_) fail(ErrorCode::InvalidArgument, "x=" + std::to_string(x) + " exceeds sieve limit");
  const std::uint64_t end = x + 1;
  return {PrimeIterator(this, std::min<std::uint64_t>(2, end), end), PrimeIterator(this, end, end)};
}

std::uint64_t FactorSieve::prime_count(std::uint64_t x) const {
  auto r = primes_up_to(x);
  return static_cast<std::uint64_t>(std::distance(r.begin(), r.end()));
}

}  // namespace artin
