#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "artin/series.hpp"

namespace artin {

struct ReportRow {
  std::uint64_t x;
  std::string bucket;
  SumKind kind;
  double value;
  std::optional<mpq_class> exact;  // set for exact-mode rows
};

/// Rows in (checkpoint, bucket, kind) order. `labels` restricts the buckets;
/// empty means every class (plus ramified slices and total when include_aux).
std::vector<ReportRow> scan_rows(const SeriesScan& scan, const std::vector<std::string>& labels = {},
                                 bool include_aux = false);

// CSV columns: x,class,sum_kind,value. Doubles print with 17 significant
// digits; exact-mode values print as reduced fractions.
void write_scan_csv(std::ostream& out, const std::vector<ReportRow>& rows);
std::vector<ReportRow> read_scan_csv(std::istream& in);

// JSON: {"context", "mode", "x_max", "checkpoints", "rows", "counts"}.
// Each row carries the double and, in exact mode, the fraction string.
void write_scan_json(std::ostream& out, const SeriesScan& scan, const std::vector<ReportRow>& rows);
std::vector<ReportRow> read_scan_json(std::istream& in);

/// Reproduction of the three-class table for x^3 + x + 1.
struct TableCell {
  std::string label;
  std::uint64_t x;
  double value;
  double rounded;
  double reference;
  double deviation;  // |value - reference|
  bool within;       // deviation <= tolerance
};

struct TableReport {
  std::vector<std::string> labels;
  std::vector<std::uint64_t> checkpoints;
  std::vector<TableCell> cells;  // row-major: labels outer, checkpoints inner
  int decimals = 3;
  double tolerance = 0.0;
  bool all_within = true;
  const TableCell& cell(std::string_view label, std::uint64_t x) const;
};

inline constexpr std::array<std::uint64_t, 3> kTableCheckpoints = {20'000, 40'000, 80'000};
inline constexpr double kTableTolerance = 0.005;

TableReport reproduce_table(const FactorSieve& sieve, unsigned threads = 1, int decimals = 3);
void write_table_csv(std::ostream& out, const TableReport& table);
void write_table_json(std::ostream& out, const TableReport& table);

// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

}  // namespace artin
