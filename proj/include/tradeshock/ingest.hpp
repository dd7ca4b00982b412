#ifndef TRADESHOCK_INGEST_HPP
#define TRADESHOCK_INGEST_HPP

#include <istream>
#include <span>
#include <string>
#include <vector>

#include "tradeshock/matrix.hpp"

namespace tradeshock {

/// One cleaned dyadic flow: `value` (nonnegative, currency units) imported by
/// `importer` from `exporter` during `year`.
struct TradeRecord {
    int year = 0;
    std::string importer;
    std::string exporter;
    double value = 0.0;
};

struct ParseDiagnostics {
    std::size_t rows_read = 0;              // data rows seen (header excluded)
    std::size_t rows_dropped_missing = 0;   // negative or non-numeric values
    std::size_t rows_summed_duplicates = 0; // rows merged into an earlier dyad-year
    std::vector<int> years_empty;           // filled by series construction
};

struct ParseResult {
    std::vector<TradeRecord> records;
    ParseDiagnostics diagnostics;
};

/// Parses `year,importer,exporter,value` CSV (header order-insensitive, extra
/// columns ignored, RFC-4180 quoting, LF or CRLF). Rows whose value is
/// negative or non-numeric are dropped as missing; duplicate
/// (year, importer, exporter) rows are summed. Malformed headers raise
/// errc::format; rows with unparseable years, empty country codes or
/// importer == exporter raise errc::row after the whole stream is scanned,
/// with every offending line listed.
ParseResult parse_dyadic_csv(std::istream& in);

/// Assembles the import matrix for one year: labels are the sorted distinct
/// country codes active that year, absent flows are zero, diagonal is zero.
/// Raises errc::empty_year when no record matches.
ImportMatrix build_import_matrix(std::span<const TradeRecord> records, int year);

struct SeriesResult {
    std::vector<ImportMatrix> matrices; // ascending year, one per non-empty year
    std::vector<int> years_empty;       // years in range with no records
};

/// Per-year matrices over [year_from, year_to]; labels are per-year since the
/// node set changes over time. year_from > year_to raises errc::argument.
SeriesResult matrix_series(std::span<const TradeRecord> records, int year_from, int year_to);

/// {rows_read, rows_dropped_missing, rows_summed_duplicates, years_empty:[...]}
std::string diagnostics_json(const ParseDiagnostics& d);

} // namespace tradeshock

#endif
