#include "artin/series.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <thread>

#include "artin/error.hpp"
#include "scan_internal.hpp"

namespace artin {

namespace {

using detail::RunBucket;
using detail::RunState;

template <class Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(count)));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < count;) fn(i);
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
}

struct Range {
  std::uint64_t lo, hi;  // inclusive
};

// Ranges covering [2, x]: cut after every multiple of range_size and after
// every extra cut point.
std::vector<Range> make_ranges(std::uint64_t x, std::uint64_t range_size, const std::vector<std::uint64_t>& cuts) {
  std::vector<std::uint64_t> ends;
  for (std::uint64_t m = range_size; m < x; m += range_size)
    if (m >= 2) ends.push_back(m);
  for (auto c : cuts)
    if (c >= 2 && c < x) ends.push_back(c);
  ends.push_back(x);
  std::sort(ends.begin(), ends.end());
  ends.erase(std::unique(ends.begin(), ends.end()), ends.end());
  std::vector<Range> out;
  std::uint64_t lo = 2;
  for (auto e : ends) {
    out.push_back({lo, e});
    lo = e + 1;
  }
  return out;
}

class Router {
 public:
  Router(const GaloisContext& ctx, const ClassTable& table)
      : table_(table), ramified_(ctx.ramified()), classes_(ctx.classes().size()) {}

  std::size_t bucket_of_prime(std::uint32_t p) const {
    const std::int32_t c = table_[p];
    if (c >= 0) return static_cast<std::size_t>(c);
    auto it = std::lower_bound(ramified_.begin(), ramified_.end(), p);
    return classes_ + static_cast<std::size_t>(it - ramified_.begin());
  }
  std::size_t total() const { return classes_ + ramified_.size(); }
  std::size_t count() const { return total() + 1; }
  std::int32_t class_of(std::uint32_t p) const { return table_[p]; }

 private:
  const ClassTable& table_;
  const std::vector<std::uint32_t>& ramified_;
  std::size_t classes_;
};

mpq_class ratio(long num, std::uint64_t den) {
  mpq_class q(num, den);
  q.canonicalize();
  return q;
}

RunState empty_state(const GaloisContext& ctx, std::size_t buckets) {
  RunState s;
  s.buckets.assign(buckets, RunBucket{});
  s.n2_class.assign(ctx.classes().size(), 0);
  return s;
}

void add_term(RunBucket& b, int mu, unsigned omega, std::uint64_t n, bool exact) {
  const auto w = static_cast<long>(omega);
  if (exact) {
    b.exact[0] += ratio(mu * w, n);
    b.exact[1] += ratio(mu, n);
    b.exact[2] += ratio(mu * (w - 1), n);
  } else {
    const double inv = 1.0 / static_cast<double>(n);
    b.approx[0].add(static_cast<double>(mu * w) * inv);
    b.approx[1].add(static_cast<double>(mu) * inv);
    b.approx[2].add(static_cast<double>(mu * (w - 1)) * inv);
  }
  b.mu_omega_raw += mu * w;
  b.mu_count += mu;
}

RunState scan_range(const Range& r, const GaloisContext& ctx, const FactorSieve& sieve, const Router& router,
                    bool exact) {
  RunState part = empty_state(ctx, router.count());
  for (std::uint64_t n = r.lo; n <= r.hi; ++n) {
    const FactorProfile f = sieve.profile_unchecked(n);
    if (f.p1_repeated) ++part.repeat_count;
    if (f.omega >= 2 && !f.p1_repeated) {
      const std::int32_t c = router.class_of(f.P2_strict);
      if (c >= 0)
        ++part.n2_class[static_cast<std::size_t>(c)];
      else
        ++part.n2_ramified;
    } else {
      ++part.n2_other;
    }
    if (f.mu == 0) continue;
    add_term(part.buckets[router.bucket_of_prime(f.p1)], f.mu, f.omega, n, exact);
    add_term(part.buckets[router.total()], f.mu, f.omega, n, exact);
  }
  return part;
}

void merge_state(RunState& into, const RunState& part, bool exact) {
  for (std::size_t i = 0; i < into.buckets.size(); ++i) into.buckets[i].merge(part.buckets[i], exact);
  for (std::size_t i = 0; i < into.n2_class.size(); ++i) into.n2_class[i] += part.n2_class[i];
  into.n2_ramified += part.n2_ramified;
  into.n2_other += part.n2_other;
  into.repeat_count += part.repeat_count;
}

struct FloorFrac {
  std::vector<std::int64_t> floor;
  std::vector<NeumaierSum> frac;
  std::vector<mpq_class> frac_exact;
};

FloorFrac floor_frac_pass(std::uint64_t x, const FactorSieve& sieve, const Router& router, const ScanOptions& opt) {
  const bool exact = opt.mode == ScanMode::Exact;
  const auto ranges = make_ranges(x, opt.range_size, {});
  std::vector<FloorFrac> parts(ranges.size());
  const std::size_t nb = router.count();
  parallel_for(ranges.size(), opt.threads, [&](std::size_t i) {
    FloorFrac& p = parts[i];
    p.floor.assign(nb, 0);
    p.frac.assign(nb, NeumaierSum{});
    if (exact) p.frac_exact.assign(nb, 0);
    for (std::uint64_t n = ranges[i].lo; n <= ranges[i].hi; ++n) {
      const FactorProfile f = sieve.profile_unchecked(n);
      if (f.mu == 0) continue;
      const std::int64_t w = f.mu * static_cast<std::int64_t>(f.omega);
      const std::int64_t q = static_cast<std::int64_t>(x / n);
      const std::uint64_t r = x % n;
      for (std::size_t b : {router.bucket_of_prime(f.p1), router.total()}) {
        p.floor[b] += w * q;
        if (exact) {
          if (r) p.frac_exact[b] += ratio(w * static_cast<long>(r), n);
        } else {
          p.frac[b].add(static_cast<double>(w) * (static_cast<double>(r) / static_cast<double>(n)));
        }
      }
    }
  });
  FloorFrac out;
  out.floor.assign(nb, 0);
  out.frac.assign(nb, NeumaierSum{});
  if (exact) out.frac_exact.assign(nb, 0);
  for (const auto& p : parts) {
    for (std::size_t b = 0; b < nb; ++b) {
      out.floor[b] += p.floor[b];
      if (exact)
        out.frac_exact[b] += p.frac_exact[b];
      else
        out.frac[b].merge(p.frac[b]);
    }
  }
  return out;
}

ScanValue weighted_value(const RunBucket& b, std::size_t i, bool exact) {
  ScanValue v;
  if (exact) {
    v.exact = b.exact[i];
    v.has_exact = true;
    v.value = v.exact.get_d();
  } else {
    v.value = b.approx[i].value();
  }
  return v;
}

ScanValue integer_value(std::int64_t n) {
  ScanValue v;
  v.value = static_cast<double>(n);
  v.has_exact = true;
  v.exact = mpq_class(static_cast<long>(n));
  return v;
}

ScanSnapshot take_snapshot(std::uint64_t x, const RunState& s, const FloorFrac& ff, const GaloisContext& ctx,
                           bool exact) {
  auto bucket = [&](std::size_t b) {
    BucketValues out;
    out[SumKind::MuOmegaOverN] = weighted_value(s.buckets[b], 0, exact);
    out[SumKind::MuOverN] = weighted_value(s.buckets[b], 1, exact);
    out[SumKind::MuOmegaMinus1OverN] = weighted_value(s.buckets[b], 2, exact);
    out[SumKind::MuOmegaRaw] = integer_value(s.buckets[b].mu_omega_raw);
    out[SumKind::FloorWeighted] = integer_value(ff.floor[b]);
    ScanValue frac;
    if (exact) {
      frac.exact = ff.frac_exact[b];
      frac.has_exact = true;
      frac.value = frac.exact.get_d();
    } else {
      frac.value = ff.frac[b].value();
    }
    out[SumKind::FracWeighted] = frac;
    out.mu_count = s.buckets[b].mu_count;
    return out;
  };
  ScanSnapshot snap;
  snap.x = x;
  const std::size_t nc = ctx.classes().size(), nr = ctx.ramified().size();
  for (std::size_t i = 0; i < nc; ++i) snap.classes.push_back(bucket(i));
  for (std::size_t i = 0; i < nr; ++i) snap.ramified.push_back(bucket(nc + i));
  snap.total = bucket(nc + nr);
  snap.n2_class = s.n2_class;
  snap.n2_ramified = s.n2_ramified;
  snap.n2_other = s.n2_other;
  snap.repeat_count = s.repeat_count;
  return snap;
}

ScanOptions normalized(const ScanOptions& in, const FactorSieve& sieve) {
  ScanOptions opt = in;
  require(opt.x_max >= 2, "x_max must be at least 2");
  if (opt.x_max > sieve.limit())
    fail(ErrorCode::InvalidArgument, "x_max=" + std::to_string(opt.x_max) + " exceeds sieve limit " +
                                         std::to_string(sieve.limit()));
  if (opt.mode == ScanMode::Exact && opt.x_max > kExactModeMaxX)
    fail(ErrorCode::Mode, "exact mode is limited to x_max <= " + std::to_string(kExactModeMaxX));
  if (opt.checkpoints.empty()) opt.checkpoints = {opt.x_max};
  for (std::size_t i = 0; i < opt.checkpoints.size(); ++i) {
    const auto c = opt.checkpoints[i];
    require(c >= 2 && c <= opt.x_max, "checkpoint " + std::to_string(c) + " outside [2, x_max]");
    require(i == 0 || c > opt.checkpoints[i - 1], "checkpoints must be strictly increasing");
  }
  require(opt.range_size >= 1, "range size must be positive");
  opt.threads = std::max(1u, opt.threads);
  require(!opt.resume || opt.state_path, "resume needs a state path");
  return opt;
}

bool nearly_equal(double a, double b, double rel_tol) {
  const double scale = std::max({std::abs(a), std::abs(b), std::numeric_limits<double>::min()});
  return std::abs(a - b) <= rel_tol * scale;
}

}  // namespace

std::string_view to_string(SumKind kind) {
  switch (kind) {
    case SumKind::MuOmegaOverN: return "MuOmegaOverN";
    case SumKind::MuOverN: return "MuOverN";
    case SumKind::MuOmegaMinus1OverN: return "MuOmegaMinus1OverN";
    case SumKind::MuOmegaRaw: return "MuOmegaRaw";
    case SumKind::FloorWeighted: return "FloorWeighted";
    case SumKind::FracWeighted: return "FracWeighted";
  }
  return "?";
}

std::optional<SumKind> parse_sum_kind(std::string_view name) {
  for (auto k : kAllSumKinds)
    if (to_string(k) == name) return k;
  return std::nullopt;
}

std::string_view to_string(ScanMode mode) { return mode == ScanMode::Exact ? "exact" : "compensated"; }

std::optional<ScanMode> parse_scan_mode(std::string_view name) {
  if (name == "exact") return ScanMode::Exact;
  if (name == "compensated") return ScanMode::Compensated;
  return std::nullopt;
}

const ScanSnapshot& SeriesScan::at(std::uint64_t x) const {
  for (const auto& s : snapshots_)
    if (s.x == x) return s;
  fail(ErrorCode::InvalidArgument, "no checkpoint at x=" + std::to_string(x));
}

const BucketValues& SeriesScan::bucket(const ScanSnapshot& snap, std::string_view label) const {
  if (label == "total") return snap.total;
  if (label.substr(0, 9) == "ramified:") {
    const std::string p(label.substr(9));
    const auto& r = ctx_.ramified();
    for (std::size_t i = 0; i < r.size(); ++i)
      if (std::to_string(r[i]) == p) return snap.ramified[i];
    fail(ErrorCode::InvalidArgument, "no ramified slice for prime " + p);
  }
  return snap.classes[ctx_.class_index(label)];
}

std::vector<std::string> SeriesScan::bucket_labels(bool include_aux) const {
  std::vector<std::string> out;
  for (const auto& c : ctx_.classes()) out.push_back(c.label);
  if (include_aux) {
    for (auto p : ctx_.ramified()) out.push_back("ramified:" + std::to_string(p));
    out.push_back("total");
  }
  return out;
}

SeriesScan scan(const GaloisContext& ctx, const FactorSieve& sieve, const ScanOptions& options) {
  const ScanOptions opt = normalized(options, sieve);
  const bool exact = opt.mode == ScanMode::Exact;
  const ClassTable table(ctx, sieve, opt.x_max, opt.threads);
  const Router router(ctx, table);

  RunState state = opt.resume ? detail::read_state(*opt.state_path, ctx, opt) : empty_state(ctx, router.count());
  if (state.buckets.size() != router.count())
    fail(ErrorCode::Integrity, "scan state bucket count does not match the context");

  const auto ranges = make_ranges(opt.x_max, opt.range_size, opt.checkpoints);
  std::size_t first = 0;
  while (first < ranges.size() && ranges[first].lo < state.next_n) ++first;
  if (first < ranges.size() && ranges[first].lo != state.next_n)
    fail(ErrorCode::Integrity, "scan state does not end on a range boundary");

  bool stopped = false;
  for (std::size_t i = first; i < ranges.size();) {
    std::size_t batch = std::min<std::size_t>(opt.threads, ranges.size() - i);
    if (opt.stop_after_ranges) {
      if (state.ranges_done >= *opt.stop_after_ranges) {
        stopped = true;
        break;
      }
      batch = std::min<std::size_t>(batch, *opt.stop_after_ranges - state.ranges_done);
    }
    std::vector<RunState> parts(batch);
    parallel_for(batch, opt.threads,
                 [&](std::size_t j) { parts[j] = scan_range(ranges[i + j], ctx, sieve, router, exact); });
    for (std::size_t j = 0; j < batch; ++j) {
      merge_state(state, parts[j], exact);
      const std::uint64_t end = ranges[i + j].hi;
      state.next_n = end + 1;
      ++state.ranges_done;
      if (std::binary_search(opt.checkpoints.begin(), opt.checkpoints.end(), end))
        state.snapshots.push_back(take_snapshot(end, state, floor_frac_pass(end, sieve, router, opt), ctx, exact));
    }
    i += batch;
    if (opt.state_path) detail::write_state(*opt.state_path, ctx, opt, state);
  }
  const bool complete = !stopped && state.next_n > opt.x_max;
  return SeriesScan(ctx, opt, std::move(state.snapshots), complete);
}

double fixed_prime_slice(std::uint32_t p, std::uint64_t x, const FactorSieve& sieve) {
  require(x <= sieve.limit(), "x exceeds sieve limit");
  require(p >= 2 && p <= x && sieve.is_prime(p), "fixed_prime_slice needs a prime p <= x");
  NeumaierSum s;
  for (std::uint64_t n = p; n <= x; n += p) {
    const FactorProfile f = sieve.profile_unchecked(n);
    if (f.p1 != p || f.mu == 0) continue;
    s.add(static_cast<double>(f.mu * static_cast<int>(f.omega)) / static_cast<double>(n));
  }
  return s.value();
}

mpq_class fixed_prime_slice_exact(std::uint32_t p, std::uint64_t x, const FactorSieve& sieve) {
  require(x <= sieve.limit(), "x exceeds sieve limit");
  require(p >= 2 && p <= x && sieve.is_prime(p), "fixed_prime_slice needs a prime p <= x");
  mpq_class s = 0;
  for (std::uint64_t n = p; n <= x; n += p) {
    const FactorProfile f = sieve.profile_unchecked(n);
    if (f.p1 != p || f.mu == 0) continue;
    s += ratio(f.mu * static_cast<long>(f.omega), n);
  }
  return s;
}

std::uint64_t count_p2_in_class(const GaloisContext& ctx, std::string_view label, std::uint64_t x,
                                const FactorSieve& sieve) {
  require(x <= sieve.limit(), "x exceeds sieve limit");
  const std::size_t target = ctx.class_index(label);
  std::uint64_t count = 0;
  for (std::uint64_t n = 2; n <= x; ++n) {
    const FactorProfile f = sieve.profile_unchecked(n);
    if (f.omega < 2 || f.p1_repeated) continue;
    const auto out = ctx.classify_unchecked(f.P2_strict);
    if (!out.ramified() && *out.class_index == target) ++count;
  }
  return count;
}

std::uint64_t count_repeated_p1(std::uint64_t x, const FactorSieve& sieve) {
  require(x <= sieve.limit(), "x exceeds sieve limit");
  std::uint64_t count = 0;
  for (std::uint64_t n = 2; n <= x; ++n)
    if (sieve.profile_unchecked(n).p1_repeated) ++count;
  return count;
}

std::uint64_t psi_smooth(std::uint64_t x, std::uint64_t y, const FactorSieve& sieve) {
  require(2 <= y && y <= x, "psi_smooth needs 2 <= y <= x");
  require(x <= sieve.limit(), "x exceeds sieve limit");
  std::uint64_t count = 1;  // n = 1
  for (std::uint64_t n = 2; n <= x; ++n)
    if (sieve.profile_unchecked(n).P1 <= y) ++count;
  return count;
}

std::vector<std::uint64_t> psi_profile(std::uint64_t x, const FactorSieve& sieve) {
  require(x >= 1 && x <= sieve.limit(), "x outside [1, sieve limit]");
  std::vector<std::uint64_t> hist(x + 1, 0);
  hist[1] = 1;
  for (std::uint64_t n = 2; n <= x; ++n) ++hist[sieve.profile_unchecked(n).P1];
  for (std::uint64_t y = 1; y <= x; ++y) hist[y] += hist[y - 1];
  return hist;
}

std::uint64_t count_p2_below(std::uint64_t x, std::uint64_t y, const FactorSieve& sieve) {
  require(2 <= y && y <= x, "count_p2_below needs 2 <= y <= x");
  require(x <= sieve.limit(), "x exceeds sieve limit");
  std::uint64_t count = 1;  // n = 1, P2 = 1
  for (std::uint64_t n = 2; n <= x; ++n)
    if (sieve.profile_unchecked(n).P2_strict <= y) ++count;
  return count;
}

std::int64_t sum_mu_in_class(const GaloisContext& ctx, std::string_view label, std::uint64_t x,
                             const FactorSieve& sieve) {
  require(x <= sieve.limit(), "x exceeds sieve limit");
  const std::size_t target = ctx.class_index(label);
  std::int64_t s = 0;
  for (std::uint64_t n = 2; n <= x; ++n) {
    const FactorProfile f = sieve.profile_unchecked(n);
    if (f.mu == 0) continue;
    const auto out = ctx.classify_unchecked(f.p1);
    if (!out.ramified() && *out.class_index == target) s += f.mu;
  }
  return s;
}

AuditReport partition_audit(const SeriesScan& scan, double rel_tol) {
  AuditReport report;
  const bool exact = scan.mode() == ScanMode::Exact;
  for (const auto& snap : scan.snapshots()) {
    for (auto kind : kAllSumKinds) {
      AuditLine line{snap.x, kind, 0.0, snap.total[kind].value, 0.0, true};
      const bool exact_kind = exact || snap.total[kind].has_exact;
      if (exact_kind) {
        mpq_class parts = 0;
        for (const auto& b : snap.classes) parts += b[kind].exact;
        for (const auto& b : snap.ramified) parts += b[kind].exact;
        line.parts = parts.get_d();
        const mpq_class diff = abs(parts - snap.total[kind].exact);
        line.pass = diff == 0;
        line.discrepancy = line.pass ? 0.0 : diff.get_d() / std::max(std::abs(line.whole), 1e-300);
      } else {
        NeumaierSum parts;
        for (const auto& b : snap.classes) parts.add(b[kind].value);
        for (const auto& b : snap.ramified) parts.add(b[kind].value);
        line.parts = parts.value();
        line.discrepancy = std::abs(line.parts - line.whole) /
                           std::max(std::abs(line.whole), std::numeric_limits<double>::min());
        line.pass = line.discrepancy <= rel_tol;
      }
      report.worst = std::max(report.worst, line.discrepancy);
      report.pass = report.pass && line.pass;
      report.lines.push_back(line);
    }
  }
  if (!report.pass) {
    for (const auto& l : report.lines) {
      if (l.pass) continue;
      fail(ErrorCode::Integrity, "partition audit failed at x=" + std::to_string(l.x) + " kind " +
                                     std::string(to_string(l.kind)) + ": parts=" + std::to_string(l.parts) +
                                     " whole=" + std::to_string(l.whole) +
                                     " discrepancy=" + std::to_string(l.discrepancy));
    }
  }
  return report;
}

std::vector<SplittingLine> check_splitting(const SeriesScan& scan, double rel_tol) {
  std::vector<SplittingLine> out;
  const bool exact = scan.mode() == ScanMode::Exact;
  for (const auto& snap : scan.snapshots()) {
    for (const auto& label : scan.bucket_labels(true)) {
      const BucketValues& b = scan.bucket(snap, label);
      SplittingLine line{snap.x, label, false, false, 0.0};
      if (exact) {
        const mpq_class lhs = b[SumKind::FloorWeighted].exact + b[SumKind::FracWeighted].exact;
        const mpq_class rhs = mpq_class(static_cast<unsigned long>(snap.x)) * b[SumKind::MuOmegaOverN].exact;
        line.floor_frac_ok = lhs == rhs;
        line.kinds_ok =
            b[SumKind::MuOmegaMinus1OverN].exact == b[SumKind::MuOmegaOverN].exact - b[SumKind::MuOverN].exact;
        if (!line.floor_frac_ok) line.worst = std::abs(mpq_class(lhs - rhs).get_d());
      } else {
        const double lhs = b[SumKind::FloorWeighted].value + b[SumKind::FracWeighted].value;
        const double rhs = static_cast<double>(snap.x) * b[SumKind::MuOmegaOverN].value;
        const double k1 = b[SumKind::MuOmegaMinus1OverN].value;
        const double k2 = b[SumKind::MuOmegaOverN].value - b[SumKind::MuOverN].value;
        line.floor_frac_ok = nearly_equal(lhs, rhs, rel_tol);
        line.kinds_ok = nearly_equal(k1, k2, rel_tol);
        auto rel = [](double a, double c) {
          return std::abs(a - c) / std::max({std::abs(a), std::abs(c), std::numeric_limits<double>::min()});
        };
        line.worst = std::max(rel(lhs, rhs), rel(k1, k2));
      }
      out.push_back(line);
    }
  }
  return out;
}

}  // namespace artin
