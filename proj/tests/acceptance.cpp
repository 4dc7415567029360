// Acceptance suite: one PASS/FAIL line per criterion.
//
// Criteria listed with --xfail are expected to fail. They still print FAIL,
// and the process exits 0 only when every other criterion passes and every
// expected failure does fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "artin/error.hpp"
#include "artin/report.hpp"
#include "artin/series.hpp"
#include "artin/verify.hpp"
#include "oracles.hpp"

using namespace artin;

namespace {

constexpr double kTableSeconds = 60.0;
constexpr double kDualitySeconds = 120.0;
constexpr double kAuditRelTol = 1e-12;
constexpr double kN2DensityTol = 0.02;
constexpr double kPrimeDensityTol = 0.01;
constexpr double kRho2Tol = 1e-8;
constexpr double kRho3Tol = 1e-6;
constexpr double kEnvelopeFactor = 10.0;
constexpr std::uint64_t kBig = 1'000'000;
constexpr std::uint64_t kSmall = 10'000;

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

unsigned worker_count() { return std::max(1u, std::thread::hardware_concurrency()); }

const FactorSieve& big_sieve() {
  static const FactorSieve s = FactorSieve::build(kBig, worker_count());
  return s;
}

const GaloisContext& c4() {
  static const GaloisContext c = GaloisContext::cyclotomic(4);
  return c;
}

const GaloisContext& s3() {
  static const GaloisContext c = GaloisContext::splitting_field({1, 1, 0, 1});
  return c;
}

const std::vector<const GaloisContext*>& contexts() {
  static const std::vector<const GaloisContext*> v = {&c4(), &s3()};
  return v;
}

// Compensated scan to 10^6 shared by criteria 3, 5 and 9.
const SeriesScan& big_scan(const GaloisContext& ctx) {
  static std::vector<std::pair<const GaloisContext*, SeriesScan>> cache;
  for (auto& [c, s] : cache)
    if (c == &ctx) return s;
  ScanOptions o;
  o.x_max = kBig;
  o.checkpoints = {100, kSmall, 100'000, kBig};
  o.threads = worker_count();
  cache.emplace_back(&ctx, scan(ctx, big_sieve(), o));
  return cache.back().second;
}

SeriesScan exact_scan(const GaloisContext& ctx) {
  ScanOptions o;
  o.x_max = kSmall;
  o.checkpoints = {100, 1000, kSmall};
  o.mode = ScanMode::Exact;
  o.threads = worker_count();
  return scan(ctx, big_sieve(), o);
}

Outcome table_reproduction() {
  const auto t0 = Clock::now();
  const auto sieve = FactorSieve::build(kTableCheckpoints.back(), worker_count());
  const auto table = reproduce_table(sieve, worker_count());
  const double secs = seconds_since(t0);
  Outcome out;
  double worst = 0.0;
  int outside = 0;
  for (const auto& c : table.cells) {
    worst = std::max(worst, c.deviation);
    outside += !c.within;
  }
  out.pass = table.all_within && secs < kTableSeconds;
  out.detail = std::to_string(outside) + "/9 cells outside +-" + fmt("%.3f", kTableTolerance) +
               ", worst deviation " + fmt("%.4f", worst) + ", " + fmt("%.2f", secs) + " s";
  for (const auto& label : table.labels) {
    out.detail += "; " + label + ":";
    for (auto x : table.checkpoints) out.detail += " " + fmt("%.4f", table.cell(label, x).value);
  }
  return out;
}

Outcome duality_suite() {
  VerifyOptions o;
  o.nmax = 5000;
  o.kmax = 3;
  o.weights = 5;
  o.threads = worker_count();
  const auto t0 = Clock::now();
  const auto report = run_verify(big_sieve(), o);
  const double secs = seconds_since(t0);
  Outcome out;
  std::uint64_t cases = 0, failures = 0;
  for (const auto& c : report.checks) {
    if (c.name.rfind("identity-", 0) != 0 && c.name != "inversion") continue;
    cases += c.cases;
    failures += c.failures;
  }
  out.pass = report.pass && failures == 0 && cases > 0 && secs < kDualitySeconds;
  out.detail = std::to_string(cases) + " identity cases, " + std::to_string(failures) + " failures, " +
               fmt("%.2f", secs) + " s";
  return out;
}

Outcome partition_audits() {
  Outcome out;
  double worst_big = 0.0;
  std::uint64_t lines = 0;
  for (const auto* ctx : contexts()) {
    try {
      const auto exact = partition_audit(exact_scan(*ctx), 0.0);
      for (const auto& l : exact.lines) out.pass = out.pass && l.discrepancy == 0.0;
      lines += exact.lines.size();
      const auto comp = partition_audit(big_scan(*ctx), kAuditRelTol);
      worst_big = std::max(worst_big, comp.worst);
      lines += comp.lines.size();
    } catch (const Error& e) {
      out.pass = false;
      out.detail = e.what();
      return out;
    }
  }
  out.pass = out.pass && worst_big <= kAuditRelTol;
  out.detail = std::to_string(lines) + " audit lines, exact at x <= 10^4, worst relative at 10^6 " +
               fmt("%.3g", worst_big);
  return out;
}

Outcome splitting() {
  Outcome out;
  std::set<std::uint64_t> seen;
  std::size_t lines = 0;
  for (const auto* ctx : contexts()) {
    for (const auto& l : check_splitting(exact_scan(*ctx), 0.0)) {
      out.pass = out.pass && l.floor_frac_ok && l.worst == 0.0;
      seen.insert(l.x);
      ++lines;
    }
  }
  out.pass = out.pass && seen == std::set<std::uint64_t>{100, 1000, kSmall};
  out.detail = std::to_string(lines) + " bucket lines at x in {100, 1000, 10^4}, exact mode";
  return out;
}

Outcome n2_density() {
  Outcome out;
  double worst = 0.0;
  for (const auto* ctx : contexts()) {
    const auto& s = big_scan(*ctx);
    for (std::size_t i = 0; i < ctx->classes().size(); ++i) {
      const double target = ctx->classes()[i].density.get_d();
      auto dev = [&](std::uint64_t x) {
        return std::abs(static_cast<double>(s.at(x).n2_class[i]) / static_cast<double>(x) - target);
      };
      const double d6 = dev(kBig), d4 = dev(kSmall);
      worst = std::max(worst, d6);
      out.pass = out.pass && d6 <= kN2DensityTol && d6 < d4;
      out.detail += ctx->specifier() + " " + ctx->classes()[i].label + ": " + fmt("%.4f", d4) + " -> " +
                    fmt("%.4f", d6) + "; ";
    }
  }
  out.detail += "worst " + fmt("%.4f", worst);
  return out;
}

Outcome prime_density() {
  Outcome out;
  double worst = 0.0;
  for (const auto* ctx : contexts()) {
    std::vector<std::uint64_t> counts(ctx->classes().size());
    std::uint64_t total = 0;
    for (std::uint32_t p : big_sieve().primes_up_to(kBig)) {
      const auto c = ctx->classify_unchecked(p);
      if (c.ramified()) continue;
      ++counts[*c.class_index];
      ++total;
    }
    for (std::size_t i = 0; i < counts.size(); ++i) {
      const double freq = static_cast<double>(counts[i]) / static_cast<double>(total);
      worst = std::max(worst, std::abs(freq - ctx->classes()[i].density.get_d()));
    }
  }
  out.pass = worst <= kPrimeDensityTol;
  out.detail = "worst class-frequency deviation " + fmt("%.5f", worst);
  return out;
}

Outcome dickman() {
  Outcome out;
  const double e2 = std::abs(dickman_rho(2.0) - (1.0 - std::log(2.0)));
  const double e3 = std::abs(dickman_rho(3.0) - oracle::dickman_rho3());
  bool unit = true;
  for (int i = 0; i <= 100; ++i) unit = unit && dickman_rho(i / 100.0) == 1.0;
  bool decreasing = true;
  double prev = dickman_rho(1.0);
  for (int i = 1; i <= 1900; ++i) {
    const double v = dickman_rho(1.0 + i / 100.0);
    decreasing = decreasing && v < prev;
    prev = v;
  }
  out.pass = e2 <= kRho2Tol && e3 <= kRho3Tol && unit && decreasing;
  out.detail = "|rho(2) - (1 - ln 2)| = " + fmt("%.2e", e2) + ", |rho(3) - quadrature| = " + fmt("%.2e", e3) +
               ", unit on [0,1]: " + (unit ? "yes" : "no") + ", decreasing on [1,20]: " +
               (decreasing ? "yes" : "no");
  return out;
}

Outcome smooth_counts() {
  Outcome out;
  // Exhaustive table: count[y] = #{n <= x : P1(n) = y}, grown one n at a time.
  std::vector<std::uint64_t> by_largest(kSmall + 1, 0);
  by_largest[1] = 1;  // n = 1
  std::uint64_t pairs = 0, mismatches = 0;
  for (std::uint64_t x = 1; x <= kSmall; ++x) {
    if (x >= 2) ++by_largest[oracle::largest_prime(x)];
    const auto profile = psi_profile(x, big_sieve());
    std::uint64_t running = 0;
    for (std::uint64_t y = 0; y <= x; ++y) {
      running += by_largest[y];
      mismatches += profile[y] != running;
      ++pairs;
    }
  }
  double worst_ratio = 0.0;
  for (int i = 0; i <= 100; ++i) {
    const double alpha = 1.0 + i * 0.05;
    const auto y = static_cast<std::uint64_t>(std::floor(std::pow(static_cast<double>(kBig), 1.0 / alpha) + 1e-9));
    const double psi = static_cast<double>(psi_smooth(kBig, y, big_sieve()));
    const double bound = kEnvelopeFactor * static_cast<double>(kBig) * std::exp(-alpha / 2.0);
    worst_ratio = std::max(worst_ratio, psi / bound);
  }
  out.pass = mismatches == 0 && worst_ratio <= 1.0;
  out.detail = std::to_string(pairs) + " (x, y) pairs, " + std::to_string(mismatches) +
               " mismatches; envelope max Psi/bound " + fmt("%.4f", worst_ratio) + " over alpha in [1, 6]";
  return out;
}

Outcome repeat_decay() {
  Outcome out;
  std::uint64_t enumerated = 0;
  for (std::uint64_t n = 2; n <= 10; ++n) enumerated += oracle::largest_repeats(n);
  const auto n10 = count_repeated_p1(10, big_sieve());
  const auto& s = big_scan(s3());
  const double d2 = static_cast<double>(s.at(100).repeat_count) / 1e2;
  const double d4 = static_cast<double>(s.at(kSmall).repeat_count) / 1e4;
  const double d6 = static_cast<double>(s.at(kBig).repeat_count) / 1e6;
  out.pass = n10 == 3 && enumerated == 3 && d2 > d4 && d4 > d6;
  out.detail = "N(10) = " + std::to_string(n10) + " (enumerated " + std::to_string(enumerated) +
               "), N(x)/x: " + fmt("%.5f", d2) + " > " + fmt("%.5f", d4) + " > " + fmt("%.5f", d6);
  return out;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

Outcome determinism() {
  Outcome out;
  const auto dir = std::filesystem::temp_directory_path() / "artin_acceptance";
  std::filesystem::create_directories(dir);
  std::size_t files = 0;
  for (const auto* ctx : contexts()) {
    std::vector<std::string> csv, json;
    for (unsigned threads : {1u, 2u, 8u}) {
      ScanOptions o;
      o.x_max = kBig;
      o.checkpoints = {kSmall, 123'457, kBig};
      o.threads = threads;
      o.range_size = 1u << 14;
      const auto s = scan(*ctx, big_sieve(), o);
      const auto rows = scan_rows(s, {}, true);
      const auto base = dir / ("scan_t" + std::to_string(threads));
      {
        std::ofstream f(base.string() + ".csv", std::ios::binary);
        write_scan_csv(f, rows);
      }
      {
        std::ofstream f(base.string() + ".json", std::ios::binary);
        write_scan_json(f, s, rows);
      }
      csv.push_back(slurp(base.string() + ".csv"));
      json.push_back(slurp(base.string() + ".json"));
      files += 2;
    }
    out.pass = out.pass && !csv[0].empty() && csv[0] == csv[1] && csv[0] == csv[2] && json[0] == json[1] &&
               json[0] == json[2];
  }
  const auto table_sieve = FactorSieve::build(kTableCheckpoints.back());
  std::vector<std::string> tables;
  for (unsigned threads : {1u, 2u, 8u}) {
    std::ostringstream t;
    write_table_csv(t, reproduce_table(table_sieve, threads));
    tables.push_back(t.str());
  }
  out.pass = out.pass && tables[0] == tables[1] && tables[0] == tables[2];
  std::filesystem::remove_all(dir);
  out.detail = std::to_string(files) + " scan report files and 3 table reports compared across 1, 2, 8 threads";
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance suite"};
  std::vector<int> xfail;
  std::vector<int> only;
  app.add_option("--xfail", xfail, "criteria expected to fail")->check(CLI::Range(1, 10));
  app.add_option("--only", only, "run just these criteria")->check(CLI::Range(1, 10));
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"table reproduction", table_reproduction},
      {"duality identity suite", duality_suite},
      {"partition audit", partition_audits},
      {"floor/frac splitting", splitting},
      {"P2 class density", n2_density},
      {"prime-level class density", prime_density},
      {"dickman rho", dickman},
      {"smooth-count oracle and envelope", smooth_counts},
      {"repeated largest prime decay", repeat_decay},
      {"thread determinism", determinism},
  };

  bool ok = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
    Outcome r;
    try {
      r = criteria[i].second();
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    const bool expected_fail = std::find(xfail.begin(), xfail.end(), id) != xfail.end();
    std::printf("%s %2d  %s: %s%s\n", r.pass ? "PASS" : "FAIL", id, criteria[i].first, r.detail.c_str(),
                expected_fail ? (r.pass ? "  [unexpected pass]" : "  [expected failure]") : "");
    std::fflush(stdout);
    ok = ok && (r.pass != expected_fail);
  }
  return ok ? 0 : 1;
}
