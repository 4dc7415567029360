#include "artin/artin.h"

#include <cstring>
#include <new>
#include <sstream>

#include "artin/error.hpp"
#include "artin/galois.hpp"
#include "artin/report.hpp"
#include "artin/series.hpp"
#include "artin/sieve.hpp"
#include "artin/verify.hpp"

struct artin_sieve {
  artin::FactorSieve sieve;
};

struct artin_context {
  artin::GaloisContext ctx;
};

struct artin_scan {
  artin::SeriesScan scan;
};

namespace {

thread_local std::string g_last_error;

artin_status set_error(artin_status code, const char* what) {
  g_last_error = what;
  return code;
}

artin_status status_of(artin::ErrorCode code) {
  switch (code) {
    case artin::ErrorCode::InvalidArgument: return ARTIN_E_INVALID_ARGUMENT;
    case artin::ErrorCode::Resource: return ARTIN_E_RESOURCE;
    case artin::ErrorCode::NotSquarefree: return ARTIN_E_NOT_SQUAREFREE;
    case artin::ErrorCode::Mode: return ARTIN_E_MODE;
    case artin::ErrorCode::Integrity: return ARTIN_E_INTEGRITY;
    case artin::ErrorCode::Io: return ARTIN_E_IO;
  }
  return ARTIN_E_INTERNAL;
}

template <class Fn>
artin_status guarded(Fn&& fn) {
  try {
    fn();
    return ARTIN_OK;
  } catch (const artin::Error& e) {
    return set_error(status_of(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return set_error(ARTIN_E_RESOURCE, "out of memory");
  } catch (const std::exception& e) {
    return set_error(ARTIN_E_INTERNAL, e.what());
  } catch (...) {
    return set_error(ARTIN_E_INTERNAL, "unknown failure");
  }
}

void need(const void* p, const char* name) {
  if (!p) artin::fail(artin::ErrorCode::InvalidArgument, std::string(name) + " is null");
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

artin::SumKind kind_arg(const char* kind) {
  need(kind, "kind");
  auto k = artin::parse_sum_kind(kind);
  if (!k) artin::fail(artin::ErrorCode::InvalidArgument, std::string("unknown sum kind ") + kind);
  return *k;
}

const artin::ScanValue& scan_cell(const artin_scan* s, std::uint64_t x, const char* bucket, const char* kind) {
  need(s, "scan");
  need(bucket, "bucket");
  return s->scan.bucket(s->scan.at(x), bucket)[kind_arg(kind)];
}

}  // namespace

extern "C" {

const char* artin_version(void) { return "0.3.0"; }
const char* artin_last_error(void) { return g_last_error.c_str(); }
void artin_string_free(char* s) { std::free(s); }

artin_status artin_sieve_build(uint64_t limit, unsigned threads, artin_sieve** out) {
  return guarded([&] {
    need(out, "out");
    *out = new artin_sieve{artin::FactorSieve::build(limit, threads)};
  });
}

artin_status artin_sieve_load(const char* path, artin_sieve** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = new artin_sieve{artin::FactorSieve::load(path)};
  });
}

artin_status artin_sieve_save(const artin_sieve* sieve, const char* path) {
  return guarded([&] {
    need(sieve, "sieve");
    need(path, "path");
    sieve->sieve.save(path);
  });
}

void artin_sieve_free(artin_sieve* sieve) { delete sieve; }

uint64_t artin_sieve_limit(const artin_sieve* sieve) { return sieve ? sieve->sieve.limit() : 0; }

artin_status artin_sieve_arith(const artin_sieve* sieve, uint64_t n, int* mu, unsigned* omega, unsigned* big_omega) {
  return guarded([&] {
    need(sieve, "sieve");
    const auto a = sieve->sieve.arith(n);
    if (mu) *mu = a.mu;
    if (omega) *omega = a.omega;
    if (big_omega) *big_omega = a.big_omega;
  });
}

artin_status artin_sieve_extremes(const artin_sieve* sieve, uint64_t n, uint32_t out[4]) {
  return guarded([&] {
    need(sieve, "sieve");
    need(out, "out");
    const auto e = sieve->sieve.extremes(n);
    out[0] = e.p1;
    out[1] = e.P1;
    out[2] = e.P2_strict;
    out[3] = e.P2_mult;
  });
}

artin_status artin_prime_count(const artin_sieve* sieve, uint64_t x, uint64_t* out) {
  return guarded([&] {
    need(sieve, "sieve");
    need(out, "out");
    *out = sieve->sieve.prime_count(x);
  });
}

artin_status artin_context_parse(const char* spec, artin_context** out) {
  return guarded([&] {
    need(spec, "spec");
    need(out, "out");
    *out = new artin_context{artin::GaloisContext::parse(spec)};
  });
}

void artin_context_free(artin_context* ctx) { delete ctx; }

artin_status artin_context_specifier(const artin_context* ctx, char** out) {
  return guarded([&] {
    need(ctx, "context");
    need(out, "out");
    *out = dup_string(ctx->ctx.specifier());
  });
}

uint64_t artin_context_group_order(const artin_context* ctx) { return ctx ? ctx->ctx.group_order() : 0; }

size_t artin_context_class_count(const artin_context* ctx) { return ctx ? ctx->ctx.classes().size() : 0; }

const char* artin_context_class_label(const artin_context* ctx, size_t i) {
  if (!ctx || i >= ctx->ctx.classes().size()) return nullptr;
  return ctx->ctx.classes()[i].label.c_str();
}

uint64_t artin_context_class_size(const artin_context* ctx, size_t i) {
  if (!ctx || i >= ctx->ctx.classes().size()) return 0;
  return ctx->ctx.classes()[i].size;
}

size_t artin_context_ramified_count(const artin_context* ctx) { return ctx ? ctx->ctx.ramified().size() : 0; }

uint32_t artin_context_ramified(const artin_context* ctx, size_t i) {
  if (!ctx || i >= ctx->ctx.ramified().size()) return 0;
  return ctx->ctx.ramified()[i];
}

artin_status artin_context_class_index(const artin_context* ctx, const char* label, size_t* out) {
  return guarded([&] {
    need(ctx, "context");
    need(label, "label");
    need(out, "out");
    *out = ctx->ctx.class_index(label);
  });
}

artin_status artin_class_density(const artin_context* ctx, const char* label, char** out) {
  return guarded([&] {
    need(ctx, "context");
    need(label, "label");
    need(out, "out");
    *out = dup_string(ctx->ctx.class_density(label).get_str());
  });
}

artin_status artin_classify(const artin_context* ctx, uint64_t p, int* ramified, size_t* class_index) {
  return guarded([&] {
    need(ctx, "context");
    need(ramified, "ramified");
    const auto outcome = ctx->ctx.classify(p);
    *ramified = outcome.ramified() ? 1 : 0;
    if (class_index && !outcome.ramified()) *class_index = *outcome.class_index;
  });
}

void artin_scan_options_init(artin_scan_options* opt) {
  if (!opt) return;
  *opt = artin_scan_options{};
  opt->threads = 1;
  opt->range_size = artin::ScanOptions{}.range_size;
}

artin_status artin_scan_run(const artin_context* ctx, const artin_sieve* sieve, const artin_scan_options* opt,
                            artin_scan** out) {
  return guarded([&] {
    need(ctx, "context");
    need(sieve, "sieve");
    need(opt, "options");
    need(out, "out");
    artin::ScanOptions so;
    so.x_max = opt->x_max;
    if (opt->checkpoints && opt->checkpoint_count)
      so.checkpoints.assign(opt->checkpoints, opt->checkpoints + opt->checkpoint_count);
    so.mode = opt->exact ? artin::ScanMode::Exact : artin::ScanMode::Compensated;
    so.threads = opt->threads;
    so.range_size = opt->range_size;
    if (opt->state_path) so.state_path = opt->state_path;
    so.resume = opt->resume != 0;
    if (opt->stop_after_ranges) so.stop_after_ranges = opt->stop_after_ranges;
    *out = new artin_scan{artin::scan(ctx->ctx, sieve->sieve, so)};
  });
}

void artin_scan_free(artin_scan* scan) { delete scan; }

int artin_scan_complete(const artin_scan* scan) { return scan && scan->scan.complete() ? 1 : 0; }

size_t artin_scan_snapshot_count(const artin_scan* scan) { return scan ? scan->scan.snapshots().size() : 0; }

uint64_t artin_scan_snapshot_x(const artin_scan* scan, size_t i) {
  if (!scan || i >= scan->scan.snapshots().size()) return 0;
  return scan->scan.snapshots()[i].x;
}

artin_status artin_scan_value(const artin_scan* scan, uint64_t x, const char* bucket, const char* kind, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = scan_cell(scan, x, bucket, kind).value;
  });
}

artin_status artin_scan_exact(const artin_scan* scan, uint64_t x, const char* bucket, const char* kind, char** out) {
  return guarded([&] {
    need(out, "out");
    const auto& v = scan_cell(scan, x, bucket, kind);
    if (!v.has_exact) artin::fail(artin::ErrorCode::Mode, "no exact value outside exact mode");
    *out = dup_string(v.exact.get_str());
  });
}

artin_status artin_scan_n2_count(const artin_scan* scan, uint64_t x, const char* label, uint64_t* out) {
  return guarded([&] {
    need(scan, "scan");
    need(label, "label");
    need(out, "out");
    *out = scan->scan.at(x).n2_class[scan->scan.context().class_index(label)];
  });
}

artin_status artin_scan_repeat_count(const artin_scan* scan, uint64_t x, uint64_t* out) {
  return guarded([&] {
    need(scan, "scan");
    need(out, "out");
    *out = scan->scan.at(x).repeat_count;
  });
}

artin_status artin_scan_audit(const artin_scan* scan, double rel_tol, double* worst) {
  return guarded([&] {
    need(scan, "scan");
    const auto report = artin::partition_audit(scan->scan, rel_tol);
    if (worst) *worst = report.worst;
  });
}

artin_status artin_scan_report(const artin_scan* scan, const char* format, const char* const* labels,
                               size_t label_count, int include_aux, char** out) {
  return guarded([&] {
    need(scan, "scan");
    need(format, "format");
    need(out, "out");
    std::vector<std::string> wanted;
    for (size_t i = 0; labels && i < label_count; ++i) {
      need(labels[i], "label");
      wanted.emplace_back(labels[i]);
    }
    const auto rows = artin::scan_rows(scan->scan, wanted, include_aux != 0);
    std::ostringstream text;
    if (std::strcmp(format, "csv") == 0)
      artin::write_scan_csv(text, rows);
    else if (std::strcmp(format, "json") == 0)
      artin::write_scan_json(text, scan->scan, rows);
    else
      artin::fail(artin::ErrorCode::InvalidArgument, std::string("unknown format ") + format);
    *out = dup_string(text.str());
  });
}

artin_status artin_reproduce_table(const artin_sieve* sieve, unsigned threads, int decimals, const char* format,
                                   char** out, int* all_within) {
  return guarded([&] {
    need(sieve, "sieve");
    need(format, "format");
    need(out, "out");
    const bool csv = std::strcmp(format, "csv") == 0;
    if (!csv && std::strcmp(format, "json") != 0)
      artin::fail(artin::ErrorCode::InvalidArgument, std::string("unknown format ") + format);
    const auto table = artin::reproduce_table(sieve->sieve, threads, decimals);
    std::ostringstream text;
    if (csv)
      artin::write_table_csv(text, table);
    else
      artin::write_table_json(text, table);
    *out = dup_string(text.str());
    if (all_within) *all_within = table.all_within ? 1 : 0;
  });
}

void artin_verify_options_init(artin_verify_options* opt) {
  if (!opt) return;
  const artin::VerifyOptions d;
  *opt = artin_verify_options{d.nmax, d.kmax, d.seed, d.weights, d.threads, 0};
}

artin_status artin_verify(const artin_sieve* sieve, const artin_verify_options* opt, char** out, int* passed) {
  return guarded([&] {
    need(sieve, "sieve");
    need(opt, "options");
    need(out, "out");
    artin::VerifyOptions vo;
    vo.nmax = opt->nmax;
    vo.kmax = opt->kmax;
    vo.seed = opt->seed;
    vo.weights = opt->weights;
    vo.threads = opt->threads;
    if (opt->flip_mu_at) vo.fault.flip_mu_at = opt->flip_mu_at;
    const auto report = artin::run_verify(sieve->sieve, vo);
    *out = dup_string(artin::to_json(report));
    if (passed) *passed = report.pass ? 1 : 0;
  });
}

artin_status artin_dickman_rho(double alpha, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = artin::dickman_rho(alpha);
  });
}

artin_status artin_psi_smooth(const artin_sieve* sieve, uint64_t x, uint64_t y, uint64_t* out) {
  return guarded([&] {
    need(sieve, "sieve");
    need(out, "out");
    *out = artin::psi_smooth(x, y, sieve->sieve);
  });
}

artin_status artin_psi_profile(const artin_sieve* sieve, uint64_t x, uint64_t* out, size_t out_len) {
  return guarded([&] {
    need(sieve, "sieve");
    need(out, "out");
    if (out_len < x + 1) artin::fail(artin::ErrorCode::InvalidArgument, "profile buffer needs x + 1 entries");
    const auto profile = artin::psi_profile(x, sieve->sieve);
    std::copy(profile.begin(), profile.end(), out);
  });
}

artin_status artin_count_p2_below(const artin_sieve* sieve, uint64_t x, uint64_t y, uint64_t* out) {
  return guarded([&] {
    need(sieve, "sieve");
    need(out, "out");
    *out = artin::count_p2_below(x, y, sieve->sieve);
  });
}

artin_status artin_count_repeated_p1(const artin_sieve* sieve, uint64_t x, uint64_t* out) {
  return guarded([&] {
    need(sieve, "sieve");
    need(out, "out");
    *out = artin::count_repeated_p1(x, sieve->sieve);
  });
}

artin_status artin_count_p2_in_class(const artin_context* ctx, const artin_sieve* sieve, const char* label,
                                     uint64_t x, uint64_t* out) {
  return guarded([&] {
    need(ctx, "context");
    need(sieve, "sieve");
    need(label, "label");
    need(out, "out");
    *out = artin::count_p2_in_class(ctx->ctx, label, x, sieve->sieve);
  });
}

artin_status artin_sum_mu_in_class(const artin_context* ctx, const artin_sieve* sieve, const char* label, uint64_t x,
                                   int64_t* out) {
  return guarded([&] {
    need(ctx, "context");
    need(sieve, "sieve");
    need(label, "label");
    need(out, "out");
    *out = artin::sum_mu_in_class(ctx->ctx, label, x, sieve->sieve);
  });
}

artin_status artin_fixed_prime_slice(const artin_sieve* sieve, uint32_t p, uint64_t x, double* out) {
  return guarded([&] {
    need(sieve, "sieve");
    need(out, "out");
    *out = artin::fixed_prime_slice(p, x, sieve->sieve);
  });
}

}  // extern "C"
