#include "artin/poly.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "artin/error.hpp"
#include "artin/numtheory.hpp"

namespace artin {

namespace {

std::uint32_t inv_mod(std::uint32_t a, std::uint32_t p) {
  return static_cast<std::uint32_t>(powmod_u64(a, p - 2, p));
}

void check_same_modulus(const PolyModP& a, const PolyModP& b) {
  if (a.modulus() != b.modulus())
    fail(ErrorCode::InvalidArgument, "polynomial modulus mismatch: " + std::to_string(a.modulus()) +
                                         " vs " + std::to_string(b.modulus()));
}

}  // namespace

IntPoly parse_int_poly(std::string_view text) {
  IntPoly f;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find(',', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view tok = text.substr(pos, end - pos);
    while (!tok.empty() && tok.front() == ' ') tok.remove_prefix(1);
    while (!tok.empty() && tok.back() == ' ') tok.remove_suffix(1);
    if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (tok.empty() || ec != std::errc() || ptr != tok.data() + tok.size())
      fail(ErrorCode::InvalidArgument, "bad polynomial coefficient '" + std::string(tok) + "'");
    f.push_back(v);
    pos = end + 1;
  }
  while (f.size() > 1 && f.back() == 0) f.pop_back();
  return f;
}

std::string format_int_poly(const IntPoly& f) {
  std::ostringstream os;
  for (std::size_t i = 0; i < f.size(); ++i) os << (i ? "," : "") << f[i];
  return os.str();
}

bool is_monic(const IntPoly& f) { return !f.empty() && f.back() == 1; }

PolyModP::PolyModP(std::uint32_t p, std::vector<std::uint32_t> coeffs) : p_(p), c_(std::move(coeffs)) {
  if (p < 2 || p >= kMaxModulus) fail(ErrorCode::InvalidArgument, "modulus out of range");
  for (auto& v : c_) v %= p_;
  trim();
}

void PolyModP::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

std::uint32_t PolyModP::operator()(std::uint32_t x) const {
  std::uint64_t acc = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = (acc * x + *it) % p_;
  return static_cast<std::uint32_t>(acc);
}

PolyModP reduce(const IntPoly& f, std::uint32_t p) {
  if (!is_monic(f)) fail(ErrorCode::InvalidArgument, "polynomial must be monic: " + format_int_poly(f));
  std::vector<std::uint32_t> c(f.size());
  const auto m = static_cast<std::int64_t>(p);
  for (std::size_t i = 0; i < f.size(); ++i) c[i] = static_cast<std::uint32_t>(((f[i] % m) + m) % m);
  return PolyModP(p, std::move(c));
}

PolyModP add(const PolyModP& a, const PolyModP& b) {
  check_same_modulus(a, b);
  const std::uint32_t p = a.modulus();
  std::vector<std::uint32_t> c(std::max(a.coeffs().size(), b.coeffs().size()), 0);
  for (std::size_t i = 0; i < c.size(); ++i) {
    std::uint64_t s = 0;
    if (i < a.coeffs().size()) s += a.coeffs()[i];
    if (i < b.coeffs().size()) s += b.coeffs()[i];
    c[i] = static_cast<std::uint32_t>(s % p);
  }
  return PolyModP(p, std::move(c));
}

PolyModP sub(const PolyModP& a, const PolyModP& b) {
  check_same_modulus(a, b);
  const std::uint32_t p = a.modulus();
  std::vector<std::uint32_t> c(std::max(a.coeffs().size(), b.coeffs().size()), 0);
  for (std::size_t i = 0; i < c.size(); ++i) {
    std::uint64_t s = p;
    if (i < a.coeffs().size()) s += a.coeffs()[i];
    if (i < b.coeffs().size()) s -= b.coeffs()[i];
    c[i] = static_cast<std::uint32_t>(s % p);
  }
  return PolyModP(p, std::move(c));
}

PolyModP mul(const PolyModP& a, const PolyModP& b) {
  check_same_modulus(a, b);
  if (a.is_zero() || b.is_zero()) return PolyModP::zero(a.modulus());
  const std::uint64_t p = a.modulus();
  const auto& x = a.coeffs();
  const auto& y = b.coeffs();
  std::vector<std::uint64_t> acc(x.size() + y.size() - 1, 0);
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < y.size(); ++j) acc[i + j] = (acc[i + j] + std::uint64_t{x[i]} * y[j]) % p;
  return PolyModP(a.modulus(), std::vector<std::uint32_t>(acc.begin(), acc.end()));
}

PolyModP derivative(const PolyModP& a) {
  const std::uint64_t p = a.modulus();
  std::vector<std::uint32_t> c;
  for (std::size_t i = 1; i < a.coeffs().size(); ++i)
    c.push_back(static_cast<std::uint32_t>(a.coeffs()[i] * (i % p) % p));
  return PolyModP(a.modulus(), std::move(c));
}

PolyModP make_monic(const PolyModP& a) {
  if (a.is_zero() || a.lead() == 1) return a;
  const std::uint64_t p = a.modulus();
  const std::uint64_t inv = inv_mod(a.lead(), a.modulus());
  std::vector<std::uint32_t> c(a.coeffs().size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = static_cast<std::uint32_t>(a.coeffs()[i] * inv % p);
  return PolyModP(a.modulus(), std::move(c));
}

std::pair<PolyModP, PolyModP> divmod(const PolyModP& a, const PolyModP& b) {
  check_same_modulus(a, b);
  if (b.is_zero()) fail(ErrorCode::InvalidArgument, "polynomial division by zero");
  const std::uint64_t p = a.modulus();
  if (a.degree() < b.degree()) return {PolyModP::zero(a.modulus()), a};
  std::vector<std::uint64_t> r(a.coeffs().begin(), a.coeffs().end());
  const auto& d = b.coeffs();
  const std::size_t db = d.size() - 1;
  const std::uint64_t inv = inv_mod(b.lead(), b.modulus());
  std::vector<std::uint32_t> q(r.size() - db, 0);
  for (std::size_t i = r.size(); i-- > db;) {
    const std::uint64_t coef = r[i] % p * inv % p;
    q[i - db] = static_cast<std::uint32_t>(coef);
    if (coef == 0) continue;
    for (std::size_t j = 0; j <= db; ++j) r[i - db + j] = (r[i - db + j] + (p - coef) * d[j]) % p;
  }
  r.resize(db);
  return {PolyModP(a.modulus(), std::move(q)),
          PolyModP(a.modulus(), std::vector<std::uint32_t>(r.begin(), r.end()))};
}

PolyModP rem(const PolyModP& a, const PolyModP& b) { return divmod(a, b).second; }

PolyModP mulmod(const PolyModP& a, const PolyModP& b, const PolyModP& f) { return rem(mul(a, b), f); }

PolyModP powmod(const PolyModP& base, std::uint64_t e, const PolyModP& f) {
  PolyModP result = rem(PolyModP::one(f.modulus()), f);
  PolyModP b = rem(base, f);
  while (e) {
    if (e & 1) result = mulmod(result, b, f);
    e >>= 1;
    if (e) b = mulmod(b, b, f);
  }
  return result;
}

PolyModP powmod_x(const PolyModP& f, std::uint64_t e) {
  if (f.degree() < 1) fail(ErrorCode::InvalidArgument, "powmod_x needs deg f >= 1");
  return powmod(PolyModP::x(f.modulus()), e, f);
}

PolyModP gcd(const PolyModP& a, const PolyModP& b) {
  check_same_modulus(a, b);
  PolyModP u = a, v = b;
  while (!v.is_zero()) {
    PolyModP r = rem(u, v);
    u = std::move(v);
    v = std::move(r);
  }
  return make_monic(u);
}

FactorShape distinct_degree_factorization(const PolyModP& f) {
  if (f.degree() < 1 || f.lead() != 1) fail(ErrorCode::InvalidArgument, "DDF needs a monic polynomial of degree >= 1");
  if (!gcd(f, derivative(f)).is_one())
    fail(ErrorCode::NotSquarefree, "polynomial is not squarefree mod " + std::to_string(f.modulus()));

  const std::uint32_t p = f.modulus();
  FactorShape shape;
  PolyModP rest = f;
  PolyModP h = PolyModP::x(p);  // x^(p^d) mod rest
  const PolyModP x = PolyModP::x(p);
  for (unsigned d = 1; 2 * d <= static_cast<unsigned>(rest.degree()); ++d) {
    h = powmod(h, p, rest);
    PolyModP g = gcd(rest, sub(h, x));
    if (!g.is_one()) {
      shape.emplace_back(d, static_cast<unsigned>(g.degree()) / d);
      rest = divmod(rest, g).first;
      h = rem(h, rest);
    }
  }
  if (rest.degree() > 0) {
    const auto d = static_cast<unsigned>(rest.degree());
    auto it = std::find_if(shape.begin(), shape.end(), [d](const auto& e) { return e.first == d; });
    if (it != shape.end())
      ++it->second;
    else
      shape.emplace_back(d, 1);
  }
  std::sort(shape.begin(), shape.end());
  return shape;
}

unsigned count_roots(const PolyModP& f) {
  if (f.degree() < 1) return 0;
  const PolyModP monic = make_monic(f);
  const PolyModP xp = powmod_x(monic, f.modulus());
  return static_cast<unsigned>(gcd(monic, sub(xp, PolyModP::x(f.modulus()))).degree());
}

namespace {

// Fraction-free (Bareiss) determinant.
mpz_class bareiss_det(std::vector<std::vector<mpz_class>> m) {
  const std::size_t n = m.size();
  int sign = 1;
  mpz_class prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      std::size_t r = k + 1;
      while (r < n && m[r][k] == 0) ++r;
      if (r == n) return 0;
      std::swap(m[k], m[r]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]);
        mpz_divexact(m[i][j].get_mpz_t(), m[i][j].get_mpz_t(), prev.get_mpz_t());
      }
    }
    prev = m[k][k];
  }
  return sign * m[n - 1][n - 1];
}

}  // namespace

mpz_class discriminant(const IntPoly& f) {
  if (!is_monic(f)) fail(ErrorCode::InvalidArgument, "discriminant needs a monic polynomial");
  const std::size_t n = f.size() - 1;
  if (n < 2) fail(ErrorCode::InvalidArgument, "discriminant needs degree >= 2");
  IntPoly df(n);
  for (std::size_t i = 1; i <= n; ++i) df[i - 1] = f[i] * static_cast<std::int64_t>(i);
  const std::size_t m = n - 1;
  const std::size_t size = n + m;
  std::vector<std::vector<mpz_class>> syl(size, std::vector<mpz_class>(size, 0));
  // Rows hold coefficients highest degree first.
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t i = 0; i <= n; ++i) syl[r][r + i] = static_cast<long>(f[n - i]);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t i = 0; i <= m; ++i) syl[m + r][r + i] = static_cast<long>(df[m - i]);
  mpz_class res = bareiss_det(std::move(syl));
  if ((n * (n - 1) / 2) % 2) res = -res;
  return res;
}

}  // namespace artin
