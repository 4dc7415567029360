#include "artin/report.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "artin/error.hpp"

namespace artin {

namespace {

using nlohmann::json;

// Reference values for x^3 + x + 1, rows "3", "1+2", "1+1+1".
constexpr std::array<std::array<double, 3>, 3> kReference = {{
    {0.250, 0.254, 0.265},
    {0.188, 0.237, 0.279},
    {-0.026, -0.008, 0.009},
}};
constexpr std::array<const char*, 3> kTableLabels = {"3", "1+2", "1+1+1"};

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        out.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        out.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.emplace_back();
    } else if (c != '\r') {
      out.back() += c;
    }
  }
  return out;
}

double parse_double(const std::string& s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) fail(ErrorCode::InvalidArgument, "bad number: " + s);
  return v;
}

SumKind kind_from(const std::string& s) {
  auto k = parse_sum_kind(s);
  if (!k) fail(ErrorCode::InvalidArgument, "unknown sum kind: " + s);
  return *k;
}

double round_to(double v, int decimals) {
  const double scale = std::pow(10.0, decimals);
  return std::round(v * scale) / scale;
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::vector<ReportRow> scan_rows(const SeriesScan& scan, const std::vector<std::string>& labels, bool include_aux) {
  std::vector<std::string> buckets = labels.empty() ? scan.bucket_labels(include_aux) : labels;
  const bool exact = scan.mode() == ScanMode::Exact;
  std::vector<ReportRow> rows;
  for (const auto& snap : scan.snapshots()) {
    for (const auto& label : buckets) {
      const BucketValues& b = scan.bucket(snap, label);
      for (auto kind : kAllSumKinds) {
        ReportRow r{snap.x, label, kind, b[kind].value, std::nullopt};
        if (exact) r.exact = b[kind].exact;
        rows.push_back(std::move(r));
      }
    }
  }
  return rows;
}

void write_scan_csv(std::ostream& out, const std::vector<ReportRow>& rows) {
  out << "x,class,sum_kind,value\n";
  for (const auto& r : rows) {
    out << r.x << ',' << csv_field(r.bucket) << ',' << to_string(r.kind) << ','
        << (r.exact ? r.exact->get_str() : format_double(r.value)) << '\n';
  }
}

std::vector<ReportRow> read_scan_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("x,class,sum_kind,value", 0) != 0)
    fail(ErrorCode::InvalidArgument, "not a scan CSV");
  std::vector<ReportRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 4) fail(ErrorCode::InvalidArgument, "bad CSV row: " + line);
    ReportRow r{std::stoull(f[0]), f[1], kind_from(f[2]), 0.0, std::nullopt};
    if (f[3].find('/') != std::string::npos || f[3].find_first_of(".eEni") == std::string::npos) {
      mpq_class q;
      if (q.set_str(f[3], 10) != 0) fail(ErrorCode::InvalidArgument, "bad fraction: " + f[3]);
      q.canonicalize();
      r.value = q.get_d();
      r.exact = q;
    } else {
      r.value = parse_double(f[3]);
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

void write_scan_json(std::ostream& out, const SeriesScan& scan, const std::vector<ReportRow>& rows) {
  json doc;
  doc["context"] = scan.context().specifier();
  doc["mode"] = std::string(to_string(scan.mode()));
  doc["x_max"] = scan.options().x_max;
  doc["checkpoints"] = scan.options().checkpoints;
  doc["complete"] = scan.complete();
  json jr = json::array();
  for (const auto& r : rows) {
    json row = {{"x", r.x}, {"class", r.bucket}, {"sum_kind", std::string(to_string(r.kind))}, {"value", r.value}};
    if (r.exact) row["exact"] = r.exact->get_str();
    jr.push_back(std::move(row));
  }
  doc["rows"] = std::move(jr);
  json counts = json::array();
  const auto& classes = scan.context().classes();
  for (const auto& snap : scan.snapshots()) {
    json c = {{"x", snap.x},
              {"n2_ramified", snap.n2_ramified},
              {"n2_other", snap.n2_other},
              {"repeat_count", snap.repeat_count}};
    for (std::size_t i = 0; i < classes.size(); ++i) {
      c["n2"][classes[i].label] = snap.n2_class[i];
      c["mu_count"][classes[i].label] = snap.classes[i].mu_count;
    }
    c["mu_count"]["total"] = snap.total.mu_count;
    counts.push_back(std::move(c));
  }
  doc["counts"] = std::move(counts);
  out << doc.dump(2) << '\n';
}

std::vector<ReportRow> read_scan_json(std::istream& in) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    fail(ErrorCode::InvalidArgument, std::string("bad scan JSON: ") + e.what());
  }
  std::vector<ReportRow> rows;
  for (const auto& row : doc.at("rows")) {
    ReportRow r{row.at("x").get<std::uint64_t>(), row.at("class").get<std::string>(),
                kind_from(row.at("sum_kind").get<std::string>()), row.at("value").get<double>(), std::nullopt};
    if (row.contains("exact")) {
      mpq_class q(row["exact"].get<std::string>(), 10);
      q.canonicalize();
      r.exact = q;
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

const TableCell& TableReport::cell(std::string_view label, std::uint64_t x) const {
  for (const auto& c : cells)
    if (c.label == label && c.x == x) return c;
  fail(ErrorCode::InvalidArgument, "no table cell for " + std::string(label) + " at x=" + std::to_string(x));
}

TableReport reproduce_table(const FactorSieve& sieve, unsigned threads, int decimals) {
  require(decimals >= 0 && decimals <= 15, "decimals must be in [0, 15]");
  const std::uint64_t x_max = kTableCheckpoints.back();
  if (sieve.limit() < x_max)
    fail(ErrorCode::InvalidArgument, "the table needs a sieve limit of at least " + std::to_string(x_max));
  const GaloisContext ctx = GaloisContext::splitting_field({1, 1, 0, 1});
  ScanOptions opt;
  opt.x_max = x_max;
  opt.checkpoints.assign(kTableCheckpoints.begin(), kTableCheckpoints.end());
  opt.threads = threads;
  const SeriesScan result = scan(ctx, sieve, opt);

  TableReport t;
  t.labels.assign(kTableLabels.begin(), kTableLabels.end());
  t.checkpoints = opt.checkpoints;
  t.decimals = decimals;
  t.tolerance = kTableTolerance;
  for (std::size_t i = 0; i < kTableLabels.size(); ++i) {
    for (std::size_t j = 0; j < kTableCheckpoints.size(); ++j) {
      const std::uint64_t x = kTableCheckpoints[j];
      const double v = result.bucket(result.at(x), kTableLabels[i])[SumKind::MuOmegaOverN].value;
      TableCell c{kTableLabels[i], x, v, round_to(v, decimals), kReference[i][j], 0.0, false};
      c.deviation = std::abs(v - c.reference);
      c.within = c.deviation <= kTableTolerance;
      t.all_within = t.all_within && c.within;
      t.cells.push_back(std::move(c));
    }
  }
  return t;
}

void write_table_csv(std::ostream& out, const TableReport& t) {
  out << "class,x,rounded,value,reference,deviation,within\n";
  std::ostringstream fixed;
  for (const auto& c : t.cells) {
    fixed.str("");
    fixed.setf(std::ios::fixed);
    fixed.precision(t.decimals);
    fixed << c.rounded;
    out << csv_field(c.label) << ',' << c.x << ',' << fixed.str() << ',' << format_double(c.value) << ','
        << format_double(c.reference) << ',' << format_double(c.deviation) << ',' << (c.within ? "yes" : "no")
        << '\n';
  }
}

void write_table_json(std::ostream& out, const TableReport& t) {
  json doc;
  doc["context"] = "poly:1,1,0,1";
  doc["sum_kind"] = "MuOmegaOverN";
  doc["decimals"] = t.decimals;
  doc["tolerance"] = t.tolerance;
  doc["all_within"] = t.all_within;
  doc["checkpoints"] = t.checkpoints;
  json cells = json::array();
  for (const auto& c : t.cells) {
    cells.push_back({{"class", c.label},
                     {"x", c.x},
                     {"rounded", c.rounded},
                     {"value", c.value},
                     {"reference", c.reference},
                     {"deviation", c.deviation},
                     {"within", c.within}});
  }
  doc["cells"] = std::move(cells);
  out << doc.dump(2) << '\n';
}

}  // namespace artin
