#include "artin/galois.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <numeric>
#include <sstream>
#include <thread>

#include "artin/error.hpp"
#include "artin/numtheory.hpp"
#include "artin/sieve.hpp"

namespace artin {

namespace {

// Partitions of n, parts ascending; ordered by part count descending so the
// identity class comes first.
void partitions(unsigned n, unsigned min_part, std::vector<unsigned>& cur,
                std::vector<std::vector<unsigned>>& out) {
  if (n == 0) {
    out.push_back(cur);
    return;
  }
  for (unsigned part = min_part; part <= n; ++part) {
    cur.push_back(part);
    partitions(n - part, part, cur, out);
    cur.pop_back();
  }
}

std::uint64_t factorial(unsigned n) {
  std::uint64_t r = 1;
  for (unsigned i = 2; i <= n; ++i) r *= i;
  return r;
}

// Number of permutations in S_n with the given cycle type.
std::uint64_t cycle_class_size(const std::vector<unsigned>& parts, unsigned n) {
  std::uint64_t denom = 1;
  for (std::size_t i = 0; i < parts.size();) {
    std::size_t j = i;
    while (j < parts.size() && parts[j] == parts[i]) ++j;
    const auto mult = static_cast<unsigned>(j - i);
    for (unsigned t = 0; t < mult; ++t) denom *= parts[i];
    denom *= factorial(mult);
    i = j;
  }
  return factorial(n) / denom;
}

std::string join_parts(const std::vector<unsigned>& parts) {
  std::string s;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) s += '+';
    s += std::to_string(parts[i]);
  }
  return s;
}

// Canonical (ascending) form of a cycle-type label, or nullopt if malformed.
std::optional<std::string> canonical_cycle_label(std::string_view label) {
  std::vector<unsigned> parts;
  std::size_t pos = 0;
  while (pos <= label.size()) {
    std::size_t end = label.find('+', pos);
    if (end == std::string_view::npos) end = label.size();
    std::string_view tok = label.substr(pos, end - pos);
    while (!tok.empty() && tok.front() == ' ') tok.remove_prefix(1);
    while (!tok.empty() && tok.back() == ' ') tok.remove_suffix(1);
    unsigned v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (tok.empty() || ec != std::errc() || ptr != tok.data() + tok.size() || v == 0) return std::nullopt;
    parts.push_back(v);
    pos = end + 1;
  }
  std::sort(parts.begin(), parts.end());
  return join_parts(parts);
}

std::vector<std::uint32_t> prime_divisors(mpz_class n) {
  std::vector<std::uint32_t> out;
  n = abs(n);
  for (std::uint64_t p = 2; p <= 0xFFFF'FFFFull && p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
      out.push_back(static_cast<std::uint32_t>(p));
      while (mpz_divisible_ui_p(n.get_mpz_t(), p)) n /= static_cast<unsigned long>(p);
    }
  }
  // Anything left is prime when trial division ran to its square root; keep
  // it only if it fits the 32-bit prime range the sieve can reach.
  if (n > 1 && n <= 0xFFFF'FFFFul) out.push_back(static_cast<std::uint32_t>(n.get_ui()));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::string cycle_type_label(const FactorShape& shape) {
  std::vector<unsigned> parts;
  for (auto [d, m] : shape)
    for (unsigned i = 0; i < m; ++i) parts.push_back(d);
  std::sort(parts.begin(), parts.end());
  return join_parts(parts);
}

GaloisContext GaloisContext::cyclotomic(std::uint32_t k) {
  require(k >= 3, "cyclotomic conductor must be at least 3");
  GaloisContext ctx;
  ctx.kind_ = Kind::Cyclotomic;
  ctx.k_ = k;
  ctx.residue_to_class_.assign(k, -1);
  std::uint64_t phi = 0;
  for (std::uint32_t r = 1; r < k; ++r)
    if (std::gcd(r, k) == 1) ++phi;
  for (std::uint32_t r = 1; r < k; ++r) {
    if (std::gcd(r, k) != 1) continue;
    ctx.residue_to_class_[r] = static_cast<std::int32_t>(ctx.classes_.size());
    ctx.classes_.push_back({std::to_string(r) + " mod " + std::to_string(k), 1, mpq_class(1, phi)});
  }
  ctx.group_order_ = phi;
  ctx.ramified_ = prime_divisors(mpz_class(static_cast<unsigned long>(k)));
  return ctx;
}

GaloisContext GaloisContext::splitting_field(const IntPoly& f) {
  require(is_monic(f), "polynomial must be monic");
  const auto deg = static_cast<unsigned>(f.size() - 1);
  require(deg >= 2 && deg <= 6, "polynomial degree must lie in [2, 6]");
  GaloisContext ctx;
  ctx.kind_ = Kind::SplittingField;
  ctx.f_ = f;
  ctx.disc_ = discriminant(f);
  require(ctx.disc_ != 0, "polynomial has a repeated root (discriminant 0)");
  ctx.group_order_ = factorial(deg);

  std::vector<std::vector<unsigned>> parts;
  std::vector<unsigned> cur;
  partitions(deg, 1, cur, parts);
  std::stable_sort(parts.begin(), parts.end(), [](const auto& a, const auto& b) { return a.size() > b.size(); });
  for (const auto& pt : parts) {
    const std::uint64_t size = cycle_class_size(pt, deg);
    ctx.classes_.push_back({join_parts(pt), size,
                            mpq_class(mpz_class(static_cast<unsigned long>(size)),
                                      mpz_class(static_cast<unsigned long>(ctx.group_order_)))});
    ctx.classes_.back().density.canonicalize();
  }
  ctx.ramified_ = prime_divisors(ctx.disc_);
  return ctx;
}

GaloisContext GaloisContext::parse(std::string_view spec) {
  auto starts = [&](std::string_view prefix) { return spec.substr(0, prefix.size()) == prefix; };
  if (starts("cyclotomic:")) {
    std::string_view rest = spec.substr(11);
    std::uint32_t k = 0;
    auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), k);
    if (ec != std::errc() || ptr != rest.data() + rest.size())
      fail(ErrorCode::InvalidArgument, "bad cyclotomic conductor '" + std::string(rest) + "'");
    return cyclotomic(k);
  }
  if (starts("poly:")) return splitting_field(parse_int_poly(spec.substr(5)));
  fail(ErrorCode::InvalidArgument, "unknown context specifier '" + std::string(spec) + "'");
}

std::string GaloisContext::specifier() const {
  if (kind_ == Kind::Cyclotomic) return "cyclotomic:" + std::to_string(k_);
  return "poly:" + format_int_poly(f_);
}

ClassOutcome GaloisContext::classify(std::uint64_t p) const {
  if (!is_prime_u64(p)) fail(ErrorCode::InvalidArgument, std::to_string(p) + " is not prime");
  if (p > 0xFFFF'FFFFull || (kind_ == Kind::SplittingField && p >= PolyModP::kMaxModulus))
    fail(ErrorCode::InvalidArgument, "prime " + std::to_string(p) + " exceeds the supported range");
  return classify_unchecked(static_cast<std::uint32_t>(p));
}

ClassOutcome GaloisContext::classify_unchecked(std::uint32_t p) const {
  if (kind_ == Kind::Cyclotomic) {
    const std::int32_t idx = residue_to_class_[p % k_];
    if (idx < 0) return {};
    return {static_cast<std::size_t>(idx)};
  }
  if (mpz_divisible_ui_p(disc_.get_mpz_t(), p)) return {};
  const FactorShape shape = distinct_degree_factorization(reduce(f_, p));
  return {find_class(cycle_type_label(shape))};
}

std::optional<std::size_t> GaloisContext::find_class(std::string_view label) const {
  std::string key(label);
  if (kind_ == Kind::SplittingField) {
    auto canon = canonical_cycle_label(label);
    if (!canon) return std::nullopt;
    key = *canon;
  }
  for (std::size_t i = 0; i < classes_.size(); ++i)
    if (classes_[i].label == key) return i;
  return std::nullopt;
}

std::size_t GaloisContext::class_index(std::string_view label) const {
  auto idx = find_class(label);
  if (!idx) fail(ErrorCode::InvalidArgument, "unknown class '" + std::string(label) + "' for " + specifier());
  return *idx;
}

mpq_class GaloisContext::class_density(std::string_view label) const {
  return classes_[class_index(label)].density;
}

ClassTable::ClassTable(const GaloisContext& ctx, const FactorSieve& sieve, std::uint64_t x, unsigned threads) {
  if (x > sieve.limit()) fail(ErrorCode::InvalidArgument, "class table bound exceeds sieve limit");
  if (ctx.classes().size() > 32000) fail(ErrorCode::Resource, "too many classes for the class table");
  table_.assign(x + 1, -2);
  constexpr std::uint64_t kChunk = 1u << 16;
  const std::uint64_t chunks = x / kChunk + 1;
  std::atomic<std::uint64_t> next{0};
  auto worker = [&] {
    for (std::uint64_t c; (c = next.fetch_add(1)) < chunks;) {
      const std::uint64_t lo = std::max<std::uint64_t>(2, c * kChunk);
      const std::uint64_t hi = std::min(x, (c + 1) * kChunk - 1);
      for (std::uint64_t n = lo; n <= hi; ++n) {
        if (!sieve.is_prime(n)) continue;
        const auto out = ctx.classify_unchecked(static_cast<std::uint32_t>(n));
        table_[n] = out.ramified() ? std::int16_t{-1} : static_cast<std::int16_t>(*out.class_index);
      }
    }
  };
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(chunks)));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
}

}  // namespace artin
