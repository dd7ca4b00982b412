// Command-line driver for the tradeshock shared library: ingest checking,
// extinction analysis, perturbation sweeps, link-removal scans and summary
// metrics, with CSV/SVG reports and a manifest per run.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "report.hpp"
#include "tradeshock.h"

namespace fs = std::filesystem;
using nlohmann::json;
using report::fmt;

namespace {

struct CliError : std::runtime_error {
    explicit CliError(const std::string& message, int code = 1)
        : std::runtime_error(message), exit_code(code) {}
    int exit_code;
};

struct Options {
    std::string data;
    std::string years;
    int iterations = 5;
    double stop_fraction = 0.5;
    double import_scale = 0.7;
    double export_scale = 0.95;
    double drop_threshold = 0.01;
    double report_threshold = 0.005;
    int null_trials = -1; // -1: per-command default (50; 100 for perturb)
    std::uint64_t seed = 0;
    std::vector<std::string> exclude_years;
    std::string out = "out";
    int threads = 1;
    bool null_nonzero_only = false;
};

// ---- C API helpers ----------------------------------------------------------

void check(ts_status status, const char* err, int exit_code = 1) {
    if (status != TS_OK)
        throw CliError(std::string(ts_status_name(status)) + ": " + err, exit_code);
}

struct Dataset {
    ts_dataset* handle = nullptr;
    ~Dataset() { ts_dataset_free(handle); }
};

struct Matrix {
    ts_matrix* handle = nullptr;
    Matrix() = default;
    Matrix(Matrix&& other) noexcept : handle(other.handle) { other.handle = nullptr; }
    Matrix& operator=(Matrix&& other) noexcept {
        std::swap(handle, other.handle);
        return *this;
    }
    Matrix(const Matrix&) = delete;
    ~Matrix() { ts_matrix_free(handle); }
    std::size_t size() const { return ts_matrix_size(handle); }
    std::string label(std::size_t i) const { return ts_matrix_label(handle, i); }
};

struct Mea {
    ts_mea_result* handle = nullptr;
    ~Mea() { ts_mea_free(handle); }
};

struct Perturb {
    ts_perturb_result* handle = nullptr;
    ~Perturb() { ts_perturb_free(handle); }
};

struct Scan {
    ts_link_scan* handle = nullptr;
    ~Scan() { ts_link_scan_free(handle); }
};

ts_params make_params(const Options& opt, int null_trials_default) {
    ts_params p;
    ts_params_init(&p);
    p.iterations = opt.iterations;
    p.stop_fraction = opt.stop_fraction;
    p.import_scale = opt.import_scale;
    p.export_scale = opt.export_scale;
    p.drop_threshold = opt.drop_threshold;
    p.report_threshold = opt.report_threshold;
    p.null_trials = opt.null_trials > 0 ? opt.null_trials : null_trials_default;
    p.seed = opt.seed;
    p.threads = opt.threads;
    p.null_nonzero_only = opt.null_nonzero_only ? 1 : 0;
    return p;
}

// ---- year planning -----------------------------------------------------------

std::pair<int, int> parse_range(const std::string& text) {
    const auto colon = text.find(':');
    try {
        if (colon == std::string::npos) {
            const int y = std::stoi(text);
            return {y, y};
        }
        return {std::stoi(text.substr(0, colon)), std::stoi(text.substr(colon + 1))};
    } catch (const std::exception&) {
        throw CliError("cannot parse year range '" + text + "' (expected FROM:TO)");
    }
}

struct YearPlan {
    int from = 0, to = 0;
    std::vector<int> process;  // years with data, in range, not excluded
    std::vector<int> excluded; // years with data suppressed by --exclude-years
    std::vector<int> empty;    // years in range with no records
};

YearPlan plan_years(const Dataset& ds, const Options& opt) {
    const std::size_t count = ts_dataset_year_count(ds.handle);
    if (count == 0) throw CliError("dataset contains no records");

    YearPlan plan;
    if (opt.years.empty()) {
        plan.from = ts_dataset_year_at(ds.handle, 0);
        plan.to = ts_dataset_year_at(ds.handle, count - 1);
    } else {
        std::tie(plan.from, plan.to) = parse_range(opt.years);
        if (plan.from > plan.to) throw CliError("--years range is reversed");
    }

    std::set<int> excluded;
    for (const std::string& item : opt.exclude_years) {
        const auto [from, to] = parse_range(item);
        for (int y = from; y <= to; ++y) excluded.insert(y);
    }

    std::set<int> present;
    for (std::size_t i = 0; i < count; ++i) present.insert(ts_dataset_year_at(ds.handle, i));
    for (int y = plan.from; y <= plan.to; ++y) {
        if (!present.count(y))
            plan.empty.push_back(y);
        else if (excluded.count(y))
            plan.excluded.push_back(y);
        else
            plan.process.push_back(y);
    }
    if (plan.process.empty()) throw CliError("no processable years in the requested range");
    return plan;
}

// ---- manifest ----------------------------------------------------------------

class Manifest {
public:
    Manifest(const std::string& command, const Options& opt, const ts_params& params) {
        j_["tool"] = "tradeshock";
        j_["version"] = ts_version();
        j_["command"] = command;
        j_["config"] = {{"data", opt.data},
                        {"years", opt.years.empty() ? "auto" : opt.years},
                        {"iterations", params.iterations},
                        {"stop_fraction", params.stop_fraction},
                        {"import_scale", params.import_scale},
                        {"export_scale", params.export_scale},
                        {"drop_threshold", params.drop_threshold},
                        {"report_threshold", params.report_threshold},
                        {"null_trials", params.null_trials},
                        {"seed", params.seed},
                        {"exclude_years", opt.exclude_years},
                        {"threads", params.threads},
                        {"null_permute_nonzero_only", params.null_nonzero_only != 0},
                        {"out", opt.out}};
        j_["input"] = {{"path", opt.data},
                       {"fnv1a64", report::hex64(report::fnv1a64_file(opt.data))}};
        last_ = std::chrono::steady_clock::now();
    }

    void stage(const std::string& name) {
        const auto now = std::chrono::steady_clock::now();
        j_["timings_ms"][name] =
            std::chrono::duration_cast<std::chrono::milliseconds>(now - last_).count();
        last_ = now;
    }

    void years(const YearPlan& plan) {
        j_["years"] = {{"from", plan.from},
                       {"to", plan.to},
                       {"processed", plan.process},
                       {"excluded", plan.excluded},
                       {"empty", plan.empty}};
    }

    void diagnostics(const json& d) { j_["ingest_diagnostics"] = d; }

    void year_failed(int year, const std::string& message) {
        j_["years"]["failed"][std::to_string(year)] = message;
        failed_ = true;
    }

    void add_output(const fs::path& path) {
        j_["outputs"].push_back({{"file", path.filename().string()},
                                 {"fnv1a64", report::hex64(report::fnv1a64_file(path))}});
    }

    bool any_failed() const { return failed_; }

    void write(const fs::path& dir) {
        // the manifest cannot carry its own hash
        j_["outputs"].push_back({{"file", "manifest.json"}, {"fnv1a64", "self"}});
        std::ofstream out(dir / "manifest.json", std::ios::binary);
        if (!out) throw CliError("cannot write manifest.json");
        out << j_.dump(2) << '\n';
    }

private:
    json j_;
    std::chrono::steady_clock::time_point last_;
    bool failed_ = false;
};

json dataset_diagnostics(const Dataset& ds, int from, int to) {
    char err[512] = {0};
    char* text = nullptr;
    check(ts_dataset_diagnostics_json(ds.handle, from, to, &text, err, sizeof err), err);
    json parsed = json::parse(text);
    ts_string_free(text);
    return parsed;
}

Dataset open_dataset(const Options& opt) {
    if (opt.data.empty()) throw CliError("--data is required");
    Dataset ds;
    char err[512] = {0};
    check(ts_dataset_open(opt.data.c_str(), &ds.handle, err, sizeof err), err);
    return ds;
}

// ---- commands ----------------------------------------------------------------

int finish(Manifest& manifest, const fs::path& out_dir) {
    manifest.stage("report");
    manifest.write(out_dir);
    if (manifest.any_failed()) {
        std::cerr << "warning: some years failed; see manifest.json\n";
        return 2;
    }
    return 0;
}

fs::path prepare_out(const Options& opt) {
    const fs::path dir(opt.out);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw CliError("cannot create output directory " + dir.string());
    return dir;
}

int cmd_ingest_check(const Options& opt) {
    Dataset ds = open_dataset(opt);
    int from = 1, to = 0; // default: dataset bounds
    if (!opt.years.empty()) std::tie(from, to) = parse_range(opt.years);
    const json diag = dataset_diagnostics(ds, from, to);
    std::cout << diag.dump(2) << '\n';

    if (!opt.out.empty()) {
        const fs::path dir = prepare_out(opt);
        const ts_params params = make_params(opt, 50);
        Manifest manifest("ingest-check", opt, params);
        manifest.diagnostics(diag);
        manifest.stage("ingest");
        std::ofstream out(dir / "diagnostics.json", std::ios::binary);
        out << diag.dump(2) << '\n';
        out.close();
        manifest.add_output(dir / "diagnostics.json");
        return finish(manifest, dir);
    }
    return 0;
}

int cmd_mea(const Options& opt) {
    Dataset ds = open_dataset(opt);
    const ts_params params = make_params(opt, 50);
    const fs::path dir = prepare_out(opt);
    Manifest manifest("mea", opt, params);
    const YearPlan plan = plan_years(ds, opt);
    manifest.years(plan);
    manifest.diagnostics(dataset_diagnostics(ds, plan.from, plan.to));
    manifest.stage("ingest");

    report::CsvWriter series(dir / "robustness_timeseries.csv",
                             {"year", "robustness", "null_mean", "null_min", "null_max",
                              "null_q05", "null_q95", "significant"});
    report::CsvWriter detail(dir / "mea_detail.csv",
                             {"year", "rank", "country", "pow", "income_fraction"});

    std::vector<double> xs, obs, means, q05s, q95s;
    std::vector<bool> fills;
    for (const int year : plan.process) {
        char err[512] = {0};
        try {
            Matrix m;
            check(ts_dataset_matrix(ds.handle, year, &m.handle, err, sizeof err), err);
            Mea result;
            check(ts_mea_run(m.handle, &params, &result.handle, err, sizeof err), err);

            ts_params year_params = params;
            year_params.seed = ts_derive_seed(params.seed, static_cast<std::uint64_t>(year));
            ts_band band{};
            check(ts_null_band(m.handle, TS_STAT_ROBUSTNESS, &year_params, &band, err,
                               sizeof err), err);

            const double robustness = ts_mea_robustness(result.handle);
            const bool significant = robustness < band.q05 || robustness > band.q95;
            series.row({std::to_string(year), fmt(robustness, 6), fmt(band.mean, 6),
                        fmt(band.min, 6), fmt(band.max, 6), fmt(band.q05, 6), fmt(band.q95, 6),
                        significant ? "true" : "false"});
            for (std::size_t r = 0; r < ts_mea_rounds(result.handle); ++r)
                detail.row({std::to_string(year), std::to_string(r + 1),
                            m.label(ts_mea_deleted_node(result.handle, r)),
                            fmt(ts_mea_power(result.handle, r), 6),
                            fmt(ts_mea_income_fraction(result.handle, r), 6)});

            xs.push_back(year);
            obs.push_back(robustness);
            means.push_back(band.mean);
            q05s.push_back(band.q05);
            q95s.push_back(band.q95);
            fills.push_back(significant);
        } catch (const CliError& e) {
            manifest.year_failed(year, e.what());
        }
    }
    manifest.stage("experiments");

    report::SvgChart chart;
    chart.title = "Robustness by year (bands: " + std::to_string(params.null_trials) +
                  " null trials, filled = outside q05..q95)";
    chart.y_label = "robustness";
    chart.series.push_back({"null mean", "#888888", false, false, xs, means, {}});
    chart.series.push_back({"null q05", "#bbbbbb", true, false, xs, q05s, {}});
    chart.series.push_back({"null q95", "#bbbbbb", true, false, xs, q95s, {}});
    chart.series.push_back({"observed", "#1f5fa8", false, true, xs, obs, fills});
    report::write_svg(dir / "robustness.svg", {chart});

    manifest.add_output(dir / "robustness_timeseries.csv");
    manifest.add_output(dir / "mea_detail.csv");
    manifest.add_output(dir / "robustness.svg");
    return finish(manifest, dir);
}

int cmd_perturb(const Options& opt) {
    Dataset ds = open_dataset(opt);
    const ts_params params = make_params(opt, 100); // per-figure default
    if (params.import_scale == 0.0 && params.export_scale > 0.0)
        throw CliError("--import-scale 0 with a nonzero --export-scale is undefined");
    const fs::path dir = prepare_out(opt);
    Manifest manifest("perturb", opt, params);
    const YearPlan plan = plan_years(ds, opt);
    manifest.years(plan);
    manifest.diagnostics(dataset_diagnostics(ds, plan.from, plan.to));
    manifest.stage("ingest");

    report::CsvWriter table(dir / "perturbation.csv",
                            {"year", "country", "power_percentage", "vulnerability_percentage"});
    report::CsvWriter maxvul(dir / "vulnerability_timeseries.csv",
                             {"year", "country", "max_vulnerability", "null_mean", "null_min",
                              "null_max", "null_q05", "null_q95", "significant"});
    report::CsvWriter power_rank(dir / "power_ranking.csv",
                                 {"year", "rank", "country", "power_percentage"});
    report::CsvWriter vul_rank(dir / "vulnerability_ranking.csv",
                               {"year", "rank", "country", "vulnerability_percentage"});

    for (const int year : plan.process) {
        char err[512] = {0};
        try {
            Matrix m;
            check(ts_dataset_matrix(ds.handle, year, &m.handle, err, sizeof err), err);
            Perturb result;
            check(ts_perturb_run(m.handle, &params, &result.handle, err, sizeof err), err);

            const std::size_t n = m.size();
            std::vector<double> power(n), vul(n);
            for (std::size_t i = 0; i < n; ++i) {
                power[i] = ts_perturb_power_pct(result.handle, i);
                vul[i] = ts_perturb_vulnerability_pct(result.handle, i);
                table.row({std::to_string(year), m.label(i), fmt(power[i], 4), fmt(vul[i], 4)});
            }

            auto ranking = [&](const std::vector<double>& values, report::CsvWriter& out) {
                std::vector<std::size_t> order(n);
                for (std::size_t i = 0; i < n; ++i) order[i] = i;
                std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                    if (values[a] != values[b]) return values[a] > values[b];
                    return a < b;
                });
                for (std::size_t r = 0; r < order.size(); ++r)
                    out.row({std::to_string(year), std::to_string(r + 1), m.label(order[r]),
                             fmt(values[order[r]], 4)});
            };
            ranking(power, power_rank);
            ranking(vul, vul_rank);

            ts_params year_params = params;
            year_params.seed = ts_derive_seed(params.seed, static_cast<std::uint64_t>(year));
            ts_band band{};
            check(ts_null_band(m.handle, TS_STAT_MAX_VULNERABILITY, &year_params, &band, err,
                               sizeof err), err);
            const std::size_t worst = ts_perturb_max_vulnerability_node(result.handle);
            const double observed = vul[worst];
            const bool significant = observed < band.q05 || observed > band.q95;
            maxvul.row({std::to_string(year), m.label(worst), fmt(observed, 4),
                        fmt(band.mean, 4), fmt(band.min, 4), fmt(band.max, 4), fmt(band.q05, 4),
                        fmt(band.q95, 4), significant ? "true" : "false"});
        } catch (const CliError& e) {
            manifest.year_failed(year, e.what());
        }
    }
    manifest.stage("experiments");

    manifest.add_output(dir / "perturbation.csv");
    manifest.add_output(dir / "vulnerability_timeseries.csv");
    manifest.add_output(dir / "power_ranking.csv");
    manifest.add_output(dir / "vulnerability_ranking.csv");
    return finish(manifest, dir);
}

int cmd_links(const Options& opt) {
    Dataset ds = open_dataset(opt);
    const ts_params params = make_params(opt, 50);
    const fs::path dir = prepare_out(opt);
    Manifest manifest("links", opt, params);
    const YearPlan plan = plan_years(ds, opt);
    manifest.years(plan);
    manifest.diagnostics(dataset_diagnostics(ds, plan.from, plan.to));
    manifest.stage("ingest");

    report::CsvWriter impacts(dir / "link_impacts.csv",
                              {"year", "country_a", "country_b", "impact", "weighted_impact"});
    report::CsvWriter maxlink(dir / "max_link_timeseries.csv",
                              {"year", "country_a", "country_b", "impact", "weighted_impact"});

    std::vector<double> xs, raw, weighted;
    for (const int year : plan.process) {
        char err[512] = {0};
        try {
            Matrix m;
            check(ts_dataset_matrix(ds.handle, year, &m.handle, err, sizeof err), err);
            // One admit-all scan serves both outputs: rows are sorted worst
            // first, so the maximum-impact link is the first row.
            ts_params scan_params = params;
            scan_params.report_threshold = -1e18;
            Scan scan;
            check(ts_link_scan_run(m.handle, &scan_params, &scan.handle, err, sizeof err), err);
            const std::size_t count = ts_link_scan_count(scan.handle);
            if (count == 0) throw CliError("no bilateral links in this year");

            for (std::size_t r = 0; r < count; ++r) {
                std::size_t a = 0, b = 0;
                double impact = 0, wimpact = 0;
                ts_link_scan_row(scan.handle, r, &a, &b, &impact, &wimpact);
                if (impact / 100.0 <= -params.report_threshold)
                    impacts.row({std::to_string(year), m.label(a), m.label(b), fmt(impact, 4),
                                 fmt(wimpact, 6)});
            }
            std::size_t a = 0, b = 0;
            double impact = 0, wimpact = 0;
            ts_link_scan_row(scan.handle, 0, &a, &b, &impact, &wimpact);
            maxlink.row({std::to_string(year), m.label(a), m.label(b), fmt(impact, 4),
                         fmt(wimpact, 6)});
            xs.push_back(year);
            raw.push_back(impact);
            weighted.push_back(wimpact);
        } catch (const CliError& e) {
            manifest.year_failed(year, e.what());
        }
    }
    manifest.stage("experiments");

    report::SvgChart top;
    top.title = "Maximum link impact by year";
    top.y_label = "impact (% of total income)";
    top.series.push_back({"impact", "#a83232", false, true, xs, raw, {}});
    report::SvgChart bottom;
    bottom.title = "Maximum link impact as a multiple of the link's weight share";
    bottom.y_label = "weighted impact";
    bottom.series.push_back({"weighted impact", "#1f5fa8", false, true, xs, weighted, {}});
    report::write_svg(dir / "link_impact.svg", {top, bottom});

    manifest.add_output(dir / "link_impacts.csv");
    manifest.add_output(dir / "max_link_timeseries.csv");
    manifest.add_output(dir / "link_impact.svg");
    return finish(manifest, dir);
}

int cmd_metrics(const Options& opt) {
    Dataset ds = open_dataset(opt);
    const ts_params params = make_params(opt, 50);
    const fs::path dir = prepare_out(opt);
    Manifest manifest("metrics", opt, params);
    const YearPlan plan = plan_years(ds, opt);
    manifest.years(plan);
    manifest.diagnostics(dataset_diagnostics(ds, plan.from, plan.to));
    manifest.stage("ingest");

    report::CsvWriter series(dir / "metrics_timeseries.csv",
                             {"year", "connectance", "max_deficit", "max_surplus", "nodes",
                              "total_income"});

    // samples for the cross-year fits, kept only for fully successful years
    std::vector<double> connectances, deficits, robustnesses, losses;
    for (const int year : plan.process) {
        char err[512] = {0};
        try {
            Matrix m;
            check(ts_dataset_matrix(ds.handle, year, &m.handle, err, sizeof err), err);
            const double c = ts_matrix_connectance(m.handle);
            std::size_t node = 0;
            double deficit = 0, surplus = 0;
            ts_matrix_max_deficit(m.handle, &node, &deficit);
            ts_matrix_max_surplus(m.handle, &node, &surplus);
            std::vector<double> incomes(m.size());
            check(ts_matrix_income(m.handle, incomes.data(), err, sizeof err), err);
            double total = 0;
            for (double v : incomes) total += v;
            series.row({std::to_string(year), fmt(c, 6), fmt(deficit, 4), fmt(surplus, 4),
                        std::to_string(m.size()), fmt(total, 4)});

            Mea result;
            check(ts_mea_run(m.handle, &params, &result.handle, err, sizeof err), err);
            ts_params scan_params = params;
            scan_params.report_threshold = -1e18;
            Scan scan;
            check(ts_link_scan_run(m.handle, &scan_params, &scan.handle, err, sizeof err), err);
            if (ts_link_scan_count(scan.handle) == 0) throw CliError("no links");
            double impact = 0;
            ts_link_scan_row(scan.handle, 0, nullptr, nullptr, &impact, nullptr);

            connectances.push_back(c);
            deficits.push_back(deficit);
            robustnesses.push_back(ts_mea_robustness(result.handle));
            losses.push_back(-impact); // income loss percent of the worst link
        } catch (const CliError& e) {
            manifest.year_failed(year, e.what());
        }
    }
    manifest.stage("experiments");

    report::CsvWriter fits(dir / "fits.csv",
                           {"name", "degree", "c0", "c1", "c2", "r_squared", "p_value", "n",
                            "year_from", "year_to", "status", "reason"});
    auto emit_fit = [&](const std::string& name, int degree, const std::vector<double>& x,
                        const std::vector<double>& y) {
        char err[512] = {0};
        ts_fit fit{};
        const ts_status status =
            degree == 1 ? ts_linear_fit(x.data(), y.data(), x.size(), &fit, err, sizeof err)
                        : ts_quadratic_fit(x.data(), y.data(), x.size(), &fit, err, sizeof err);
        if (status == TS_OK) {
            fits.row({name, std::to_string(degree), fmt(fit.coeff[0], 6), fmt(fit.coeff[1], 6),
                      degree == 2 ? fmt(fit.coeff[2], 6) : "", fmt(fit.r_squared, 6),
                      fmt(fit.p_value, 6), std::to_string(fit.n), std::to_string(plan.from),
                      std::to_string(plan.to), "ok", ""});
        } else {
            fits.row({name, std::to_string(degree), "", "", "", "", "",
                      std::to_string(x.size()), std::to_string(plan.from),
                      std::to_string(plan.to), "skipped", err});
        }
    };
    emit_fit("robustness_vs_connectance", 1, connectances, robustnesses);
    emit_fit("robustness_vs_max_deficit", 1, deficits, robustnesses);
    emit_fit("max_link_loss_vs_connectance", 2, connectances, losses);

    manifest.add_output(dir / "metrics_timeseries.csv");
    manifest.add_output(dir / "fits.csv");
    return finish(manifest, dir);
}

void validate_options(const Options& opt) {
    if (opt.iterations < 1) throw CliError("--iterations must be at least 1");
    if (!(opt.stop_fraction > 0.0 && opt.stop_fraction <= 1.0))
        throw CliError("--stop-fraction must lie in (0, 1]");
    if (opt.import_scale < 0.0 || opt.import_scale > 1.0 || opt.export_scale < 0.0 ||
        opt.export_scale > 1.0)
        throw CliError("--import-scale and --export-scale must lie in [0, 1]");
    if (opt.drop_threshold < 0.0 || opt.drop_threshold >= 1.0)
        throw CliError("--drop-threshold must lie in [0, 1)");
    if (opt.null_trials != -1 && opt.null_trials < 2)
        throw CliError("--null-trials must be at least 2");
    if (opt.threads < 1) throw CliError("--threads must be at least 1");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Shock propagation and robustness analysis for weighted directed "
                 "trade networks"};
    app.set_version_flag("--version", ts_version());
    app.set_config("--config", "", "configuration file (key = value, same names as flags)");
    app.fallthrough();

    Options opt;
    app.add_option("--data", opt.data, "dyadic trade CSV (year,importer,exporter,value)");
    app.add_option("--years", opt.years, "year range FROM:TO (default: all years in the data)");
    app.add_option("--iterations", opt.iterations, "rebalancing steps per shock")
        ->capture_default_str();
    app.add_option("--stop-fraction", opt.stop_fraction,
                   "extinction stops below this income fraction")
        ->capture_default_str();
    app.add_option("--import-scale", opt.import_scale, "perturbation import factor a")
        ->capture_default_str();
    app.add_option("--export-scale", opt.export_scale, "perturbation export factor b")
        ->capture_default_str();
    app.add_option("--drop-threshold", opt.drop_threshold,
                   "relative income drop counted as damage")
        ->capture_default_str();
    app.add_option("--report-threshold", opt.report_threshold,
                   "minimum loss fraction for link_impacts rows")
        ->capture_default_str();
    app.add_option("--null-trials", opt.null_trials,
                   "null-model trials per band (default 50; 100 for perturb)");
    app.add_option("--seed", opt.seed, "base random seed")->capture_default_str();
    app.add_option("--exclude-years", opt.exclude_years,
                   "comma-separated year ranges to skip, e.g. 1914:1919,1939:1948")
        ->delimiter(',');
    app.add_option("--out", opt.out, "output directory")->capture_default_str();
    app.add_option("--threads", opt.threads, "worker threads")->capture_default_str();
    app.add_flag("--null-permute-nonzero-only", opt.null_nonzero_only,
                 "null model permutes only nonzero weights");

    app.require_subcommand(1);
    CLI::App* ingest = app.add_subcommand("ingest-check", "parse the data and print diagnostics");
    CLI::App* mea = app.add_subcommand("mea", "maximal extinction analysis with null bands");
    CLI::App* perturb = app.add_subcommand("perturb", "power/vulnerability perturbation sweep");
    CLI::App* links = app.add_subcommand("links", "bilateral link-removal impact scan");
    CLI::App* metrics = app.add_subcommand("metrics", "network metrics and cross-year fits");

    CLI11_PARSE(app, argc, argv);

    try {
        validate_options(opt);
        if (app.got_subcommand(ingest)) return cmd_ingest_check(opt);
        if (app.got_subcommand(mea)) return cmd_mea(opt);
        if (app.got_subcommand(perturb)) return cmd_perturb(opt);
        if (app.got_subcommand(links)) return cmd_links(opt);
        if (app.got_subcommand(metrics)) return cmd_metrics(opt);
        throw CliError("no subcommand selected");
    } catch (const CliError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.exit_code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
