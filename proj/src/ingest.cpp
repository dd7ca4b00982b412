#include "tradeshock/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include "tradeshock/errors.hpp"

namespace tradeshock {

namespace {

std::string to_lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

// Reads one CSV record (RFC-4180 quoting, so fields may contain commas and
// newlines). Returns false at end of stream. line_no tracks the line the
// record started on, for error reporting.
bool read_record(std::istream& in, std::vector<std::string>& fields, std::size_t& line_no,
                 std::size_t& next_line) {
    fields.clear();
    int c = in.get();
    if (c == EOF) return false;
    line_no = next_line;

    std::string field;
    bool quoted = false;
    for (;;) {
        if (c == EOF) break;
        char ch = static_cast<char>(c);
        if (quoted) {
            if (ch == '"') {
                if (in.peek() == '"') {
                    field.push_back('"');
                    in.get();
                } else {
                    quoted = false;
                }
            } else {
                if (ch == '\n') ++next_line;
                field.push_back(ch);
            }
        } else if (ch == '"' && field.empty()) {
            quoted = true;
        } else if (ch == ',') {
            fields.push_back(field);
            field.clear();
        } else if (ch == '\n') {
            ++next_line;
            break;
        } else if (ch != '\r') {
            field.push_back(ch);
        }
        c = in.get();
    }
    fields.push_back(field);
    return true;
}

bool parse_int(const std::string& raw, int& out) {
    const std::string s = trim(raw);
    if (s.empty()) return false;
    const char* b = s.data();
    const char* e = b + s.size();
    auto [p, ec] = std::from_chars(b, e, out);
    return ec == std::errc() && p == e;
}

bool parse_double(const std::string& raw, double& out) {
    const std::string s = trim(raw);
    if (s.empty()) return false;
    const char* b = s.data();
    const char* e = b + s.size();
    auto [p, ec] = std::from_chars(b, e, out);
    return ec == std::errc() && p == e;
}

} // namespace

ParseResult parse_dyadic_csv(std::istream& in) {
    // Swallow a UTF-8 BOM if present.
    if (in.peek() == 0xEF) {
        char bom[3];
        in.read(bom, 3);
        if (in.gcount() != 3 || bom[1] != char(0xBB) || bom[2] != char(0xBF))
            fail(errc::format, "input does not start with a CSV header");
    }

    std::vector<std::string> fields;
    std::size_t line_no = 0, next_line = 1;
    if (!read_record(in, fields, line_no, next_line))
        fail(errc::format, "empty input: missing header row");

    int col_year = -1, col_importer = -1, col_exporter = -1, col_value = -1;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        const std::string name = to_lower(trim(fields[i]));
        if (name == "year") col_year = static_cast<int>(i);
        else if (name == "importer") col_importer = static_cast<int>(i);
        else if (name == "exporter") col_exporter = static_cast<int>(i);
        else if (name == "value") col_value = static_cast<int>(i);
    }
    if (col_year < 0 || col_importer < 0 || col_exporter < 0 || col_value < 0)
        fail(errc::format,
             "malformed header: expected columns year, importer, exporter, value");
    const std::size_t min_fields =
        static_cast<std::size_t>(std::max({col_year, col_importer, col_exporter, col_value})) + 1;

    ParseResult result;
    std::vector<std::string> row_errors;
    // (year, importer, exporter) -> index into records, for duplicate summing
    std::map<std::tuple<int, std::string, std::string>, std::size_t> seen;

    while (read_record(in, fields, line_no, next_line)) {
        if (fields.size() == 1 && trim(fields[0]).empty()) continue; // blank line
        ++result.diagnostics.rows_read;

        if (fields.size() < min_fields) {
            row_errors.push_back("line " + std::to_string(line_no) + ": too few columns");
            continue;
        }
        int year = 0;
        if (!parse_int(fields[static_cast<std::size_t>(col_year)], year)) {
            row_errors.push_back("line " + std::to_string(line_no) + ": unparseable year '" +
                                 trim(fields[static_cast<std::size_t>(col_year)]) + "'");
            continue;
        }
        const std::string importer = trim(fields[static_cast<std::size_t>(col_importer)]);
        const std::string exporter = trim(fields[static_cast<std::size_t>(col_exporter)]);
        if (importer.empty() || exporter.empty()) {
            row_errors.push_back("line " + std::to_string(line_no) + ": empty country code");
            continue;
        }
        if (importer == exporter) {
            row_errors.push_back("line " + std::to_string(line_no) +
                                 ": importer equals exporter ('" + importer + "')");
            continue;
        }
        double value = 0.0;
        if (!parse_double(fields[static_cast<std::size_t>(col_value)], value) ||
            !std::isfinite(value) || value < 0.0) {
            // Negative sentinels and unreadable numbers are missing data.
            ++result.diagnostics.rows_dropped_missing;
            continue;
        }

        const auto key = std::make_tuple(year, importer, exporter);
        if (auto it = seen.find(key); it != seen.end()) {
            result.records[it->second].value += value;
            ++result.diagnostics.rows_summed_duplicates;
        } else {
            seen.emplace(key, result.records.size());
            result.records.push_back({year, importer, exporter, value});
        }
    }

    if (!row_errors.empty()) {
        std::string msg = std::to_string(row_errors.size()) + " malformed row(s):";
        for (const auto& e : row_errors) msg += "\n  " + e;
        fail(errc::row, msg);
    }
    return result;
}

ImportMatrix build_import_matrix(std::span<const TradeRecord> records, int year) {
    std::set<std::string> names;
    for (const auto& r : records) {
        if (r.year != year) continue;
        names.insert(r.importer);
        names.insert(r.exporter);
    }
    if (names.empty())
        fail(errc::empty_year, "no trade records for year " + std::to_string(year));

    ImportMatrix m;
    m.year = year;
    m.labels.assign(names.begin(), names.end());
    m.values = Square(m.labels.size());

    std::unordered_map<std::string, std::size_t> index;
    index.reserve(m.labels.size());
    for (std::size_t i = 0; i < m.labels.size(); ++i) index.emplace(m.labels[i], i);

    for (const auto& r : records) {
        if (r.year != year) continue;
        m.values(index.at(r.importer), index.at(r.exporter)) += r.value;
    }
    for (std::size_t i = 0; i < m.size(); ++i) m.values(i, i) = 0.0;
    return m;
}

SeriesResult matrix_series(std::span<const TradeRecord> records, int year_from, int year_to) {
    if (year_from > year_to)
        fail(errc::argument, "year_from (" + std::to_string(year_from) +
                                 ") exceeds year_to (" + std::to_string(year_to) + ")");
    std::set<int> present;
    for (const auto& r : records) present.insert(r.year);

    SeriesResult out;
    for (int y = year_from; y <= year_to; ++y) {
        if (present.count(y))
            out.matrices.push_back(build_import_matrix(records, y));
        else
            out.years_empty.push_back(y);
    }
    return out;
}

std::string diagnostics_json(const ParseDiagnostics& d) {
    std::ostringstream os;
    os << "{\"rows_read\": " << d.rows_read
       << ", \"rows_dropped_missing\": " << d.rows_dropped_missing
       << ", \"rows_summed_duplicates\": " << d.rows_summed_duplicates
       << ", \"years_empty\": [";
    for (std::size_t i = 0; i < d.years_empty.size(); ++i) {
        if (i) os << ", ";
        os << d.years_empty[i];
    }
    os << "]}";
    return os.str();
}

void validate(const ImportMatrix& m) {
    if (m.labels.size() != m.values.size())
        fail(errc::argument, "label count does not match matrix size");
    if (m.size() == 0) fail(errc::argument, "import matrix must have at least one node");
    std::set<std::string> unique(m.labels.begin(), m.labels.end());
    if (unique.size() != m.labels.size())
        fail(errc::argument, "duplicate country labels");
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (m.values(i, i) != 0.0)
            fail(errc::argument, "nonzero diagonal at " + m.labels[i]);
        for (std::size_t j = 0; j < m.size(); ++j) {
            const double v = m.values(i, j);
            if (!(v >= 0.0) || !std::isfinite(v))
                fail(errc::argument, "negative or non-finite entry at (" + m.labels[i] +
                                         ", " + m.labels[j] + ")");
        }
    }
}

} // namespace tradeshock
