#include "tradeshock.h"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <functional>
#include <limits>
#include <new>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "tradeshock/errors.hpp"
#include "tradeshock/experiments.hpp"
#include "tradeshock/ingest.hpp"
#include "tradeshock/metrics.hpp"
#include "tradeshock/model.hpp"
#include "tradeshock/rng.hpp"

using namespace tradeshock;

struct ts_dataset {
    std::vector<TradeRecord> records;
    ParseDiagnostics diagnostics;
    std::vector<int> years; // ascending, distinct
};

struct ts_matrix {
    ImportMatrix matrix;
};

struct ts_mea_result {
    MEAResult result;
};

struct ts_perturb_result {
    PerturbationTable table;
};

struct ts_link_scan {
    std::vector<LinkImpactRow> rows;
};

namespace {

void set_err(char* err, size_t err_len, const char* message) {
    if (!err || err_len == 0) return;
    std::strncpy(err, message, err_len - 1);
    err[err_len - 1] = '\0';
}

ts_status map_code(errc code) {
    switch (code) {
    case errc::io: return TS_ERR_IO;
    case errc::format: return TS_ERR_FORMAT;
    case errc::row: return TS_ERR_ROW;
    case errc::argument: return TS_ERR_ARGUMENT;
    case errc::empty_year: return TS_ERR_EMPTY_YEAR;
    case errc::dimension: return TS_ERR_DIMENSION;
    case errc::non_finite: return TS_ERR_NONFINITE;
    case errc::diverged: return TS_ERR_DIVERGED;
    case errc::singular: return TS_ERR_SINGULAR;
    case errc::degenerate_baseline: return TS_ERR_DEGENERATE;
    case errc::exhausted: return TS_ERR_EXHAUSTED;
    case errc::internal: return TS_ERR_INTERNAL;
    }
    return TS_ERR_INTERNAL;
}

// Runs the body, translating exceptions into status codes + err buffer.
template <typename Fn>
ts_status guarded(char* err, size_t err_len, Fn&& body) {
    try {
        return body();
    } catch (const error& e) {
        set_err(err, err_len, e.what());
        return map_code(e.code());
    } catch (const std::bad_alloc&) {
        set_err(err, err_len, "out of memory");
        return TS_ERR_NOMEM;
    } catch (const std::exception& e) {
        set_err(err, err_len, e.what());
        return TS_ERR_INTERNAL;
    } catch (...) {
        set_err(err, err_len, "unknown error");
        return TS_ERR_INTERNAL;
    }
}

ts_dataset* make_dataset(ParseResult&& parsed) {
    auto* ds = new ts_dataset{std::move(parsed.records), std::move(parsed.diagnostics), {}};
    std::set<int> years;
    for (const auto& r : ds->records) years.insert(r.year);
    ds->years.assign(years.begin(), years.end());
    return ds;
}

MEAOptions mea_options(const ts_params& p) {
    return {p.iterations, p.stop_fraction, p.threads};
}

PerturbationOptions perturb_options(const ts_params& p) {
    return {p.import_scale, p.export_scale, p.iterations, p.drop_threshold, p.threads};
}

} // namespace

void ts_params_init(ts_params* params) {
    if (!params) return;
    *params = ts_params{5, 0.5, 0.7, 0.95, 0.01, 0.005, 50, 0, 1, 0};
}

const char* ts_version(void) { return "0.1.0"; }

uint64_t ts_derive_seed(uint64_t base, uint64_t index) { return derive_seed(base, index); }

const char* ts_status_name(ts_status status) {
    switch (status) {
    case TS_OK: return "ok";
    case TS_ERR_IO: return "io error";
    case TS_ERR_FORMAT: return "format error";
    case TS_ERR_ROW: return "row error";
    case TS_ERR_ARGUMENT: return "argument error";
    case TS_ERR_EMPTY_YEAR: return "empty year";
    case TS_ERR_DIMENSION: return "dimension mismatch";
    case TS_ERR_NONFINITE: return "non-finite value";
    case TS_ERR_DIVERGED: return "diverged";
    case TS_ERR_SINGULAR: return "singular system";
    case TS_ERR_DEGENERATE: return "degenerate baseline";
    case TS_ERR_EXHAUSTED: return "exhausted";
    case TS_ERR_NOMEM: return "out of memory";
    case TS_ERR_INTERNAL: return "internal error";
    }
    return "unknown";
}

ts_status ts_dataset_open(const char* path, ts_dataset** out, char* err, size_t err_len) {
    return guarded(err, err_len, [&]() -> ts_status {
        if (!path || !out) fail(errc::argument, "path and out must be non-null");
        std::ifstream in(path, std::ios::binary);
        if (!in) fail(errc::io, std::string("cannot open '") + path + "'");
        ParseResult parsed = parse_dyadic_csv(in);
        *out = make_dataset(std::move(parsed));
        return TS_OK;
    });
}

ts_status ts_dataset_from_string(const char* text, ts_dataset** out, char* err, size_t err_len) {
    return guarded(err, err_len, [&]() -> ts_status {
        if (!text || !out) fail(errc::argument, "text and out must be non-null");
        std::istringstream in{std::string(text)};
        ParseResult parsed = parse_dyadic_csv(in);
        *out = make_dataset(std::move(parsed));
        return TS_OK;
    });
}

void ts_dataset_free(ts_dataset* dataset) { delete dataset; }

ts_status ts_dataset_diagnostics_json(const ts_dataset* dataset, int year_from, int year_to,
                                      char** json, char* err, size_t err_len) {
    return guarded(err, err_len, [&]() -> ts_status {
        if (!dataset || !json) fail(errc::argument, "dataset and json must be non-null");
        ParseDiagnostics d = dataset->diagnostics;
        if (year_from > year_to && !dataset->years.empty()) {
            year_from = dataset->years.front();
            year_to = dataset->years.back();
        }
        for (int y = year_from; y <= year_to; ++y)
            if (!std::binary_search(dataset->years.begin(), dataset->years.end(), y))
                d.years_empty.push_back(y);
        const std::string text = diagnostics_json(d);
        *json = new char[text.size() + 1];
        std::memcpy(*json, text.c_str(), text.size() + 1);
        return TS_OK;
    });
}

void ts_string_free(char* text) { delete[] text; }

size_t ts_dataset_year_count(const ts_dataset* dataset) {
    return dataset ? dataset->years.size() : 0;
}

int ts_dataset_year_at(const ts_dataset* dataset, size_t index) {
    if (!dataset || index >= dataset->years.size()) return std::numeric_limits<int>::min();
    return dataset->years[index];
}

ts_status ts_dataset_matrix(const ts_dataset* dataset, int year, ts_matrix** out, char* err,
                            size_t err_len) {
    return guarded(err, err_len, [&]() -> ts_status {
        if (!dataset || !out) fail(errc::argument, "dataset and out must be non-null");
        *out = new ts_matrix{build_import_matrix(dataset->records, year)};
        return TS_OK;
    });
}

void ts_matrix_free(ts_matrix* matrix) { delete matrix; }

size_t ts_matrix_size(const ts_matrix* matrix) { return matrix ? matrix->matrix.size() : 0; }

int ts_matrix_year(const ts_matrix* matrix) { return matrix ? matrix->matrix.year : 0; }

const char* ts_matrix_label(const ts_matrix* matrix, size_t i) {
    if (!matrix || i >= matrix->matrix.size()) return nullptr;
    return matrix->matrix.labels[i].c_str();
}

double ts_matrix_value(const ts_matrix* matrix, size_t i, size_t j) {
    if (!matrix || i >= matrix->matrix.size() || j >= matrix->matrix.size())
        return std::numeric_limits<double>::quiet_NaN();
    return matrix->matrix.values(i, j);
}

double ts_matrix_total(const ts_matrix* matrix) {
    return matrix ? matrix->matrix.values.total() : 0.0;
}

ts_status ts_matrix_income(const ts_matrix* matrix, double* out, char* err, size_t err_len) {
    return guarded(err, err_len, [&]() -> ts_status {
        if (!matrix || !out) fail(errc::argument, "matrix and out must be non-null");
        const std::vector<double> inc = income(matrix->matrix, derive_model(matrix->matrix));
        std::copy(inc.begin(), inc.end(), out);
        return TS_OK;
    });
}

double ts_matrix_connectance(const ts_matrix* matrix) {
    return matrix ? connectance(matrix->matrix) : 0.0;
}

void ts_matrix_max_deficit(const ts_matrix* matrix, size_t* node, double* value) {
    if (!matrix) return;
    const auto [i, v] = max_trade_deficit(matrix->matrix);
    if (node) *node = i;
    if (value) *value = v;
}

void ts_matrix_max_surplus(const ts_matrix* matrix, size_t* node, double* value) {
    if (!matrix) return;
    const auto [i, v] = max_trade_surplus(matrix->matrix);
    if (node) *node = i;
    if (value) *value = v;
}

ts_status ts_null_matrix(const ts_matrix* matrix, uint64_t seed, int nonzero_only,
                         ts_matrix** out, char* err, size_t err_len) {
    return guarded(err, err_len, [&]() -> ts_status {
        if (!matrix || !out) fail(errc::argument, "matrix and out must be non-null");
        *out = new ts_matrix{null_model(matrix->matrix, seed,
                                        nonzero_only ? NullMode::nonzero_only
                                                     : NullMode::whole_row)};
        return TS_OK;
    });
}

ts_status ts_mea_run(const ts_matrix* matrix, const ts_params* params, ts_mea_result** out,
                     char* err, size_t err_len) {
    return guarded(err, err_len, [&]() -> ts_status {
        if (!matrix || !params || !out) fail(errc::argument, "null argument");
        *out = new ts_mea_result{mea(matrix->matrix, mea_options(*params))};
        return TS_OK;
    });
}

void ts_mea_free(ts_mea_result* result) { delete result; }

double ts_mea_robustness(const ts_mea_result* result) {
    return result ? result->result.robustness : 0.0;
}

size_t ts_mea_rounds(const ts_mea_result* result) {
    return result ? result->result.deletion_order.size() : 0;
}

size_t ts_mea_deleted_node(const ts_mea_result* result, size_t round) {
    if (!result || round >= result->result.deletion_order.size())
        return std::numeric_limits<size_t>::max();
    return result->result.deletion_order[round];
}

double ts_mea_power(const ts_mea_result* result, size_t round) {
    if (!result || round >= result->result.pow_at_step.size())
        return std::numeric_limits<double>::quiet_NaN();
    return result->result.pow_at_step[round];
}

double ts_mea_income_fraction(const ts_mea_result* result, size_t round) {
    if (!result || round >= result->result.income_fraction_trace.size())
        return std::numeric_limits<double>::quiet_NaN();
    return result->result.income_fraction_trace[round];
}

ts_status ts_perturb_run(const ts_matrix* matrix, const ts_params* params,
                         ts_perturb_result** out, char* err, size_t err_len) {
    return guarded(err, err_len, [&]() -> ts_status {
        if (!matrix || !params || !out) fail(errc::argument, "null argument");
        const IncomeModel model = derive_model(matrix->matrix);
        *out = new ts_perturb_result{
            perturbation_scan(matrix->matrix, model, perturb_options(*params))};
        return TS_OK;
    });
}

void ts_perturb_free(ts_perturb_result* result) { delete result; }

double ts_perturb_power_pct(const ts_perturb_result* result, size_t node) {
    if (!result || node >= result->table.power_pct.size())
        return std::numeric_limits<double>::quiet_NaN();
    return result->table.power_pct[node];
}

double ts_perturb_vulnerability_pct(const ts_perturb_result* result, size_t node) {
    if (!result || node >= result->table.vulnerability_pct.size())
        return std::numeric_limits<double>::quiet_NaN();
    return result->table.vulnerability_pct[node];
}

size_t ts_perturb_max_vulnerability_node(const ts_perturb_result* result) {
    if (!result || result->table.vulnerability_pct.empty())
        return std::numeric_limits<size_t>::max();
    return max_vulnerability(result->table).first;
}

ts_status ts_link_impact(const ts_matrix* matrix, size_t i, size_t j, const ts_params* params,
                         double* impact_pct, char* err, size_t err_len) {
    return guarded(err, err_len, [&]() -> ts_status {
        if (!matrix || !params || !impact_pct) fail(errc::argument, "null argument");
        const IncomeModel model = derive_model(matrix->matrix);
        *impact_pct = link_impact(matrix->matrix, model, i, j, params->iterations);
        return TS_OK;
    });
}

ts_status ts_link_scan_run(const ts_matrix* matrix, const ts_params* params, ts_link_scan** out,
                           char* err, size_t err_len) {
    return guarded(err, err_len, [&]() -> ts_status {
        if (!matrix || !params || !out) fail(errc::argument, "null argument");
        const IncomeModel model = derive_model(matrix->matrix);
        *out = new ts_link_scan{link_scan(
            matrix->matrix, model,
            {params->iterations, params->report_threshold, params->threads})};
        return TS_OK;
    });
}

void ts_link_scan_free(ts_link_scan* scan) { delete scan; }

size_t ts_link_scan_count(const ts_link_scan* scan) { return scan ? scan->rows.size() : 0; }

void ts_link_scan_row(const ts_link_scan* scan, size_t index, size_t* node_a, size_t* node_b,
                      double* impact_pct, double* weighted_impact) {
    if (!scan || index >= scan->rows.size()) return;
    const LinkImpactRow& row = scan->rows[index];
    if (node_a) *node_a = row.a;
    if (node_b) *node_b = row.b;
    if (impact_pct) *impact_pct = row.impact_pct;
    if (weighted_impact) *weighted_impact = row.weighted_impact;
}

ts_status ts_null_band(const ts_matrix* matrix, ts_statistic statistic, const ts_params* params,
                       ts_band* out, char* err, size_t err_len) {
    return guarded(err, err_len, [&]() -> ts_status {
        if (!matrix || !params || !out) fail(errc::argument, "null argument");
        const NullMode mode =
            params->null_nonzero_only ? NullMode::nonzero_only : NullMode::whole_row;

        std::function<double(const ImportMatrix&)> stat;
        std::string name;
        if (statistic == TS_STAT_ROBUSTNESS) {
            const MEAOptions opts{params->iterations, params->stop_fraction, 1};
            stat = [opts](const ImportMatrix& m) { return mea(m, opts).robustness; };
            name = "robustness";
        } else if (statistic == TS_STAT_MAX_VULNERABILITY) {
            const PerturbationOptions opts = perturb_options(*params);
            stat = [opts](const ImportMatrix& m) {
                const PerturbationTable t =
                    perturbation_scan(m, derive_model(m),
                                      {opts.import_scale, opts.export_scale, opts.iterations,
                                       opts.drop_threshold, 1});
                return max_vulnerability(t).second;
            };
            name = "max_vulnerability";
        } else {
            fail(errc::argument, "unknown statistic");
        }

        const NullBand band = null_band(matrix->matrix, stat, name, params->null_trials,
                                        params->seed, params->threads, mode);
        *out = ts_band{band.mean, band.min, band.max, band.q05, band.q95, band.trials,
                       band.successes};
        return TS_OK;
    });
}

ts_status ts_linear_fit(const double* x, const double* y, size_t n, ts_fit* out, char* err,
                        size_t err_len) {
    return guarded(err, err_len, [&]() -> ts_status {
        if (!x || !y || !out) fail(errc::argument, "null argument");
        const FitResult fit = linear_fit({x, n}, {y, n});
        *out = ts_fit{{fit.coefficients[0], fit.coefficients[1], 0.0}, 1, fit.r_squared,
                      fit.p_value, static_cast<int>(fit.n)};
        return TS_OK;
    });
}

ts_status ts_quadratic_fit(const double* x, const double* y, size_t n, ts_fit* out, char* err,
                           size_t err_len) {
    return guarded(err, err_len, [&]() -> ts_status {
        if (!x || !y || !out) fail(errc::argument, "null argument");
        const FitResult fit = quadratic_fit({x, n}, {y, n});
        *out = ts_fit{{fit.coefficients[0], fit.coefficients[1], fit.coefficients[2]}, 2,
                      fit.r_squared, fit.p_value, static_cast<int>(fit.n)};
        return TS_OK;
    });
}
