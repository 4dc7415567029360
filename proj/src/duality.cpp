#include "artin/duality.hpp"

#include "artin/error.hpp"
#include "artin/galois.hpp"

namespace artin {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

struct Divisor {
  std::uint64_t value;
  Factorization factors;
};

std::vector<Divisor> all_divisors(const Factorization& f) {
  std::vector<Divisor> out{{1, {}}};
  for (const auto& [p, e] : f) {
    const std::size_t base = out.size();
    for (std::size_t i = 0; i < base; ++i) {
      std::uint64_t v = out[i].value;
      for (std::uint32_t j = 1; j <= e; ++j) {
        v *= p;
        Divisor d{v, out[i].factors};
        d.factors.push_back({p, j});
        out.push_back(std::move(d));
      }
    }
  }
  return out;
}

int mu_of(std::uint64_t d, const FactorSieve& sieve, const ArithmeticFault& fault) {
  int mu = sieve.arith(d).mu;
  if (fault.flip_mu_at && *fault.flip_mu_at == d) mu = -mu;
  return mu;
}

int sign_pow(unsigned k) { return (k % 2) ? -1 : 1; }

void check_n(std::uint64_t n, const FactorSieve& sieve) {
  if (n < 2 || n > sieve.limit())
    fail(ErrorCode::InvalidArgument, "n=" + std::to_string(n) + " outside [2, sieve limit]");
}

}  // namespace

PrimeWeight PrimeWeight::random(std::uint64_t seed) {
  return PrimeWeight("random(seed=" + std::to_string(seed) + ")", [seed](std::uint32_t p) {
    const std::uint64_t h = splitmix64(seed * 0x100000001B3ull ^ p);
    const long num = static_cast<long>(h % 13) - 6;
    const long den = 1 + static_cast<long>((h >> 16) % 7);
    mpq_class v(num, den);
    v.canonicalize();
    return v;
  });
}

PrimeWeight PrimeWeight::constant(const mpq_class& value) {
  return PrimeWeight("constant(" + value.get_str() + ")", [value](std::uint32_t) { return value; });
}

PrimeWeight PrimeWeight::class_indicator(const GaloisContext& ctx, std::size_t class_index) {
  require(class_index < ctx.classes().size(), "class index out of range");
  return PrimeWeight("indicator(" + ctx.classes()[class_index].label + ")",
                     [&ctx, class_index](std::uint32_t p) {
                       const auto out = ctx.classify_unchecked(p);
                       return mpq_class(!out.ramified() && *out.class_index == class_index ? 1 : 0);
                     });
}

mpq_class PrimeWeight::operator()(std::uint64_t m) const {
  if (m == 1) return 0;
  return rule_(static_cast<std::uint32_t>(m));
}

mpz_class binomial_ext(long top, unsigned bottom) {
  if (top == -1) return bottom == 0 ? 1 : 0;
  if (top < 0) fail(ErrorCode::InvalidArgument, "binomial top below -1");
  if (bottom > static_cast<unsigned long>(top)) return 0;
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(top), bottom);
  return r;
}

std::uint32_t kth_largest_prime(const Factorization& f, unsigned k) {
  if (k == 0 || f.size() < k) return 1;
  return f[f.size() - k].prime;
}

std::uint32_t kth_smallest_prime(const Factorization& f, unsigned k) {
  if (k == 0 || f.size() < k) return 1;
  return f[k - 1].prime;
}

mpq_class divisor_sum(std::uint64_t n, unsigned k, Identity id, const PrimeWeight& f,
                      const FactorSieve& sieve, const ArithmeticFault& fault) {
  check_n(n, sieve);
  require(k >= 1, "k must be at least 1");
  mpq_class total = 0;
  for (const auto& d : all_divisors(sieve.factorize(n))) {
    const int mu = mu_of(d.value, sieve, fault);
    if (mu == 0) continue;
    const long w = static_cast<long>(d.factors.size());
    mpq_class term;
    switch (id) {
      case Identity::LargestK: term = f(kth_largest_prime(d.factors, k)); break;
      case Identity::SmallestK: term = f(kth_smallest_prime(d.factors, k)); break;
      case Identity::BinomLargest: term = binomial_ext(w - 1, k - 1) * f(kth_largest_prime(d.factors, 1)); break;
      case Identity::BinomSmallest: term = binomial_ext(w - 1, k - 1) * f(kth_smallest_prime(d.factors, 1)); break;
      case Identity::Inversion: fail(ErrorCode::InvalidArgument, "use check_inversion for the inverted identity");
    }
    total += mu * term;
  }
  return total;
}

mpq_class identity_rhs(std::uint64_t n, unsigned k, Identity id, const PrimeWeight& f, const FactorSieve& sieve) {
  check_n(n, sieve);
  require(k >= 1, "k must be at least 1");
  const Factorization fac = sieve.factorize(n);
  const long w = static_cast<long>(fac.size());
  const int sign = sign_pow(k);
  switch (id) {
    case Identity::LargestK: return sign * binomial_ext(w - 1, k - 1) * f(kth_smallest_prime(fac, 1));
    case Identity::SmallestK: return sign * binomial_ext(w - 1, k - 1) * f(kth_largest_prime(fac, 1));
    case Identity::BinomLargest: return sign * f(kth_smallest_prime(fac, k));
    case Identity::BinomSmallest: return sign * f(kth_largest_prime(fac, k));
    case Identity::Inversion: break;
  }
  fail(ErrorCode::InvalidArgument, "identity_rhs covers identities 1-4 only");
}

IdentityReport check_identity(std::uint64_t n, unsigned k, Identity id, const PrimeWeight& f,
                              const FactorSieve& sieve, const ArithmeticFault& fault) {
  if (id == Identity::Inversion) return check_inversion(n, f, sieve, fault);
  IdentityReport r{n, id, k, divisor_sum(n, k, id, f, sieve, fault), identity_rhs(n, k, id, f, sieve), false};
  r.pass = r.lhs == r.rhs;
  return r;
}

IdentityReport check_inversion(std::uint64_t n, const PrimeWeight& f, const FactorSieve& sieve,
                               const ArithmeticFault& fault) {
  check_n(n, sieve);
  const Factorization fac = sieve.factorize(n);
  const long w = static_cast<long>(fac.size());
  IdentityReport r{n, Identity::Inversion, 2, 0, 0, false};
  r.lhs = mu_of(n, sieve, fault) * (w - 1) * f(fac.front().prime);
  for (const auto& d : all_divisors(fac)) {
    const int mu = mu_of(n / d.value, sieve, fault);
    if (mu == 0) continue;
    // P_2 in the strict sense: second largest distinct prime.
    r.rhs += mu * f(kth_largest_prime(d.factors, 2));
  }
  r.pass = r.lhs == r.rhs;
  return r;
}

RearrangementReport check_rearrangement(std::uint64_t x, const PrimeWeight& f, const FactorSieve& sieve) {
  require(x >= 1 && x <= sieve.limit(), "x outside [1, sieve limit]");
  RearrangementReport r{x, 0, 0, false};
  for (std::uint64_t n = 1; n <= x; ++n) {
    for (const auto& d : all_divisors(sieve.factorize(n))) {
      const int mu = sieve.arith(n / d.value).mu;
      if (mu != 0) r.by_n += mu * f(kth_largest_prime(d.factors, 2));
    }
  }
  // prefix[y] = sum_{d <= y} f(P_2(d))
  std::vector<mpq_class> prefix(x + 1, 0);
  for (std::uint64_t d = 1; d <= x; ++d) prefix[d] = prefix[d - 1] + f(sieve.extremes(d).P2_strict);
  for (std::uint64_t m = 1; m <= x; ++m) {
    const int mu = sieve.arith(m).mu;
    if (mu != 0) r.by_m += mu * prefix[x / m];
  }
  r.pass = r.by_n == r.by_m;
  return r;
}

}  // namespace artin
