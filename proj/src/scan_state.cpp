#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "artin/error.hpp"
#include "scan_internal.hpp"

namespace artin::detail {

namespace {

constexpr std::string_view kHeader = "artin-scan-state 1";

std::string hexfloat(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", v);
  return buf;
}

double parse_hexfloat(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') fail(ErrorCode::Integrity, "bad number in scan state: " + s);
  return v;
}

std::uint64_t parse_u64(const std::string& s) {
  try {
    std::size_t pos = 0;
    const auto v = std::stoull(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    fail(ErrorCode::Integrity, "bad integer in scan state: " + s);
  }
}

std::int64_t parse_i64(const std::string& s) {
  try {
    std::size_t pos = 0;
    const auto v = std::stoll(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    fail(ErrorCode::Integrity, "bad integer in scan state: " + s);
  }
}

mpq_class parse_rational(const std::string& s) {
  mpq_class q;
  if (q.set_str(s, 10) != 0) fail(ErrorCode::Integrity, "bad rational in scan state: " + s);
  q.canonicalize();
  return q;
}

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string tok; in >> tok;) out.push_back(tok);
  return out;
}

template <class T>
std::string join(const std::vector<T>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
  return out;
}

std::string encode_bucket(const RunBucket& b) {
  std::string out;
  for (std::size_t i = 0; i < kWeightedKinds; ++i)
    out += hexfloat(b.approx[i].raw_sum()) + " " + hexfloat(b.approx[i].raw_comp()) + " " + b.exact[i].get_str() + " ";
  return out + std::to_string(b.mu_omega_raw) + " " + std::to_string(b.mu_count);
}

RunBucket decode_bucket(const std::string& s) {
  const auto tok = split_ws(s);
  if (tok.size() != 3 * kWeightedKinds + 2) fail(ErrorCode::Integrity, "malformed bucket in scan state");
  RunBucket b;
  for (std::size_t i = 0; i < kWeightedKinds; ++i) {
    b.approx[i] = NeumaierSum::from_raw(parse_hexfloat(tok[3 * i]), parse_hexfloat(tok[3 * i + 1]));
    b.exact[i] = parse_rational(tok[3 * i + 2]);
  }
  b.mu_omega_raw = parse_i64(tok[3 * kWeightedKinds]);
  b.mu_count = parse_i64(tok[3 * kWeightedKinds + 1]);
  return b;
}

std::string encode_values(const BucketValues& b) {
  std::string out;
  for (const auto& v : b.kinds) out += hexfloat(v.value) + " " + (v.has_exact ? v.exact.get_str() : "-") + " ";
  return out + std::to_string(b.mu_count);
}

BucketValues decode_values(const std::string& s) {
  const auto tok = split_ws(s);
  BucketValues b;
  if (tok.size() != 2 * b.kinds.size() + 1) fail(ErrorCode::Integrity, "malformed snapshot in scan state");
  for (std::size_t i = 0; i < b.kinds.size(); ++i) {
    b.kinds[i].value = parse_hexfloat(tok[2 * i]);
    b.kinds[i].has_exact = tok[2 * i + 1] != "-";
    if (b.kinds[i].has_exact) b.kinds[i].exact = parse_rational(tok[2 * i + 1]);
  }
  b.mu_count = parse_i64(tok.back());
  return b;
}

std::vector<std::uint64_t> parse_list(const std::string& s) {
  std::vector<std::uint64_t> out;
  std::stringstream in(s);
  for (std::string item; std::getline(in, item, ',');)
    if (!item.empty()) out.push_back(parse_u64(item));
  return out;
}

std::string hash_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

std::string header_block(const GaloisContext& ctx, const ScanOptions& opt) {
  std::string out(kHeader);
  out += "\ncontext = " + ctx.specifier();
  out += "\nmode = " + std::string(to_string(opt.mode));
  out += "\nrange_size = " + std::to_string(opt.range_size);
  out += "\nx_max = " + std::to_string(opt.x_max);
  out += "\ncheckpoints = " + join(opt.checkpoints) + "\n";
  return out;
}

}  // namespace

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

void write_state(const std::filesystem::path& path, const GaloisContext& ctx, const ScanOptions& opt,
                 const RunState& state) {
  std::string body = header_block(ctx, opt);
  auto kv = [&](const std::string& k, const std::string& v) { body += k + " = " + v + "\n"; };
  kv("next_n", std::to_string(state.next_n));
  kv("ranges_done", std::to_string(state.ranges_done));
  kv("buckets", std::to_string(state.buckets.size()));
  for (std::size_t i = 0; i < state.buckets.size(); ++i) kv("bucket." + std::to_string(i), encode_bucket(state.buckets[i]));
  kv("n2_class", join(state.n2_class));
  kv("n2_ramified", std::to_string(state.n2_ramified));
  kv("n2_other", std::to_string(state.n2_other));
  kv("repeat_count", std::to_string(state.repeat_count));
  kv("snapshots", std::to_string(state.snapshots.size()));
  for (std::size_t i = 0; i < state.snapshots.size(); ++i) {
    const ScanSnapshot& s = state.snapshots[i];
    const std::string p = "snapshot." + std::to_string(i) + ".";
    kv(p + "x", std::to_string(s.x));
    for (std::size_t j = 0; j < s.classes.size(); ++j) kv(p + "class." + std::to_string(j), encode_values(s.classes[j]));
    for (std::size_t j = 0; j < s.ramified.size(); ++j)
      kv(p + "ramified." + std::to_string(j), encode_values(s.ramified[j]));
    kv(p + "total", encode_values(s.total));
    kv(p + "n2_class", join(s.n2_class));
    kv(p + "n2_ramified", std::to_string(s.n2_ramified));
    kv(p + "n2_other", std::to_string(s.n2_other));
    kv(p + "repeat_count", std::to_string(s.repeat_count));
  }
  body += "hash = " + hash_hex(fnv1a64(body)) + "\n";

  // Write-then-rename so an interrupted write never leaves a torn file.
  const auto tmp = std::filesystem::path(path.string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::Io, "cannot write scan state " + tmp.string());
    out << body;
    if (!out.flush()) fail(ErrorCode::Io, "cannot write scan state " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) fail(ErrorCode::Io, "cannot replace scan state " + path.string() + ": " + ec.message());
}

RunState read_state(const std::filesystem::path& path, const GaloisContext& ctx, const ScanOptions& opt) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::Io, "cannot open scan state " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();

  const auto hash_pos = text.rfind("hash = ");
  if (hash_pos == std::string::npos || (hash_pos > 0 && text[hash_pos - 1] != '\n'))
    fail(ErrorCode::Integrity, "scan state has no integrity hash");
  const std::string body = text.substr(0, hash_pos);
  std::string stored = text.substr(hash_pos + 7);
  while (!stored.empty() && (stored.back() == '\n' || stored.back() == '\r')) stored.pop_back();
  if (stored != hash_hex(fnv1a64(body))) fail(ErrorCode::Integrity, "scan state hash mismatch");

  const std::string expected = header_block(ctx, opt);
  if (body.compare(0, expected.size(), expected) != 0)
    fail(ErrorCode::Integrity, "scan state was written for a different context or options");

  std::map<std::string, std::string> kv;
  std::istringstream lines(body.substr(expected.size()));
  for (std::string line; std::getline(lines, line);) {
    const auto eq = line.find(" = ");
    if (eq == std::string::npos) fail(ErrorCode::Integrity, "malformed scan state line: " + line);
    kv[line.substr(0, eq)] = line.substr(eq + 3);
  }
  auto get = [&](const std::string& k) -> const std::string& {
    auto it = kv.find(k);
    if (it == kv.end()) fail(ErrorCode::Integrity, "scan state is missing " + k);
    return it->second;
  };

  RunState s;
  s.next_n = parse_u64(get("next_n"));
  s.ranges_done = parse_u64(get("ranges_done"));
  const auto nb = parse_u64(get("buckets"));
  for (std::uint64_t i = 0; i < nb; ++i) s.buckets.push_back(decode_bucket(get("bucket." + std::to_string(i))));
  s.n2_class = parse_list(get("n2_class"));
  s.n2_ramified = parse_u64(get("n2_ramified"));
  s.n2_other = parse_u64(get("n2_other"));
  s.repeat_count = parse_u64(get("repeat_count"));
  if (s.n2_class.size() != ctx.classes().size()) fail(ErrorCode::Integrity, "scan state class count mismatch");

  const auto ns = parse_u64(get("snapshots"));
  for (std::uint64_t i = 0; i < ns; ++i) {
    const std::string p = "snapshot." + std::to_string(i) + ".";
    ScanSnapshot snap;
    snap.x = parse_u64(get(p + "x"));
    for (std::size_t j = 0; j < ctx.classes().size(); ++j)
      snap.classes.push_back(decode_values(get(p + "class." + std::to_string(j))));
    for (std::size_t j = 0; j < ctx.ramified().size(); ++j)
      snap.ramified.push_back(decode_values(get(p + "ramified." + std::to_string(j))));
    snap.total = decode_values(get(p + "total"));
    snap.n2_class = parse_list(get(p + "n2_class"));
    snap.n2_ramified = parse_u64(get(p + "n2_ramified"));
    snap.n2_other = parse_u64(get(p + "n2_other"));
    snap.repeat_count = parse_u64(get(p + "repeat_count"));
    s.snapshots.push_back(std::move(snap));
  }
  return s;
}

}  // namespace artin::detail
