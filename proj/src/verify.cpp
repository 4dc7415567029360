#include "artin/verify.hpp"

#include <json.hpp>

#include "artin/error.hpp"
#include "artin/galois.hpp"
#include "artin/series.hpp"

namespace artin {

namespace {

using nlohmann::json;

class Recorder {
 public:
  explicit Recorder(VerifyReport& r) : report_(r) {}

  VerifyCheck& open(std::string name) {
    report_.checks.push_back({std::move(name)});
    return report_.checks.back();
  }

  void fail_case(VerifyCheck& check, json detail) {
    ++check.failures;
    report_.pass = false;
    if (report_.counterexample.empty()) {
      detail["check"] = check.name;
      report_.counterexample = detail.dump();
    }
  }

 private:
  VerifyReport& report_;
};

json identity_detail(const IdentityReport& r, const PrimeWeight& w) {
  return {{"n", r.n},           {"identity", static_cast<int>(r.identity)}, {"k", r.k},
          {"weight", w.name()}, {"lhs", r.lhs.get_str()},                  {"rhs", r.rhs.get_str()}};
}

}  // namespace

VerifyReport run_verify(const FactorSieve& sieve, const VerifyOptions& opt) {
  require(opt.nmax >= 2, "nmax must be at least 2");
  require(opt.kmax >= 1, "kmax must be at least 1");
  require(opt.weights >= 1, "need at least one weight");
  if (opt.nmax > sieve.limit()) fail(ErrorCode::InvalidArgument, "nmax exceeds sieve limit");

  VerifyReport report;
  report.checks.reserve(8);  // references into checks stay valid
  Recorder rec(report);
  std::vector<PrimeWeight> weights;
  for (unsigned i = 0; i < opt.weights; ++i) weights.push_back(PrimeWeight::random(opt.seed + i));

  for (Identity id : {Identity::LargestK, Identity::SmallestK, Identity::BinomLargest, Identity::BinomSmallest}) {
    VerifyCheck& check = rec.open("identity-" + std::to_string(static_cast<int>(id)));
    for (unsigned k = 1; k <= opt.kmax; ++k) {
      for (const auto& w : weights) {
        for (std::uint64_t n = 2; n <= opt.nmax; ++n) {
          const IdentityReport r = check_identity(n, k, id, w, sieve, opt.fault);
          ++check.cases;
          if (!r.pass) rec.fail_case(check, identity_detail(r, w));
        }
      }
    }
  }

  {
    VerifyCheck& check = rec.open("inversion");
    for (const auto& w : weights) {
      for (std::uint64_t n = 2; n <= opt.nmax; ++n) {
        const IdentityReport r = check_inversion(n, w, sieve, opt.fault);
        ++check.cases;
        if (!r.pass) rec.fail_case(check, identity_detail(r, w));
      }
    }
  }

  {
    VerifyCheck& check = rec.open("rearrangement");
    const std::uint64_t x = std::min(opt.rearrangement_x, opt.nmax);
    for (const auto& w : weights) {
      const RearrangementReport r = check_rearrangement(x, w, sieve);
      ++check.cases;
      if (!r.pass)
        rec.fail_case(check, {{"x", x}, {"weight", w.name()}, {"by_n", r.by_n.get_str()}, {"by_m", r.by_m.get_str()}});
    }
  }

  const std::uint64_t audit_x = std::min({opt.audit_x, opt.nmax, kExactModeMaxX});
  ScanOptions so;
  so.x_max = audit_x;
  so.mode = ScanMode::Exact;
  so.threads = opt.threads;
  for (std::uint64_t c : {100u, 1000u, 10000u})
    if (c < audit_x) so.checkpoints.push_back(c);
  so.checkpoints.push_back(audit_x);

  VerifyCheck& split = rec.open("splitting");
  VerifyCheck& audit = rec.open("partition-audit");
  for (const auto& ctx : {GaloisContext::cyclotomic(4), GaloisContext::splitting_field({1, 1, 0, 1})}) {
    const SeriesScan s = scan(ctx, sieve, so);
    for (const auto& line : check_splitting(s)) {
      ++split.cases;
      if (!line.floor_frac_ok || !line.kinds_ok)
        rec.fail_case(split, {{"context", ctx.specifier()},
                              {"x", line.x},
                              {"class", line.bucket},
                              {"floor_frac_ok", line.floor_frac_ok},
                              {"kinds_ok", line.kinds_ok}});
    }
    ++audit.cases;
    try {
      partition_audit(s);
    } catch (const Error& e) {
      rec.fail_case(audit, {{"context", ctx.specifier()}, {"error", e.what()}});
    }
  }
  return report;
}

std::string to_json(const VerifyReport& report) {
  json doc;
  doc["pass"] = report.pass;
  json checks = json::array();
  for (const auto& c : report.checks)
    checks.push_back({{"name", c.name}, {"cases", c.cases}, {"failures", c.failures}, {"pass", c.pass()}});
  doc["checks"] = std::move(checks);
  doc["counterexample"] = report.counterexample.empty() ? json(nullptr) : json::parse(report.counterexample);
  return doc.dump(2);
}

}  // namespace artin
