#ifndef TRADESHOCK_EXPERIMENTS_HPP
#define TRADESHOCK_EXPERIMENTS_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tradeshock/matrix.hpp"
#include "tradeshock/model.hpp"

namespace tradeshock {

/// Fraction of total income destroyed k steps after deleting node i,
/// measured against income(m, model). May be negative when the deletion
/// raises total income. Raises errc::degenerate_baseline when the baseline
/// income sum is not positive.
double node_power(const ImportMatrix& m, const IncomeModel& model, std::size_t i, int k);

struct MEAOptions {
    int iterations = 5;
    double stop_fraction = 0.5;
    int threads = 1;
};

struct MEAResult {
    std::vector<std::size_t> deletion_order;      // indices into the input labels
    std::vector<std::string> deleted_labels;
    std::vector<double> pow_at_step;              // maximizing power per round
    std::vector<double> income_fraction_trace;    // remaining original-income fraction
    double robustness = 0.0;                      // original-income share of the deleted set
};

/// Maximal extinction analysis: repeatedly deletes the node with the highest
/// power (ties to the lowest index), carrying the evolved matrix and the
/// cumulatively adjusted model between rounds, until the simulated income
/// falls below stop_fraction of the original. Robustness is measured in
/// original incomes. Raises errc::exhausted if every node is deleted without
/// crossing the threshold.
MEAResult mea(const ImportMatrix& m, const MEAOptions& options = {});

struct YearOutcome {
    int year = 0;
    std::optional<MEAResult> result;
    std::string error; // set when the year's run failed
};

/// mea mapped over a series; per-year failures are recorded, not propagated.
std::vector<YearOutcome> robustness_timeseries(std::span<const ImportMatrix> series,
                                               const MEAOptions& options = {});

struct PerturbationOptions {
    double import_scale = 0.7;  // a
    double export_scale = 0.95; // b
    int iterations = 5;
    double drop_threshold = 0.01;
    int threads = 1;
};

/// Pairwise impact table of a full perturbation sweep. The same boolean
/// impact matrix feeds both columns: power counts how many other countries a
/// node's shock damages by at least drop_threshold (relative), vulnerability
/// counts how many shocks damage the node. Percentages divide by the full
/// country count. Countries with zero baseline income never count as dropped.
struct PerturbationTable {
    std::vector<std::string> labels;
    std::vector<double> power_pct;
    std::vector<double> vulnerability_pct;
    std::vector<std::string> row_errors;  // per shocked node; empty on success
    double import_scale = 0.7;
    double export_scale = 0.95;
    double drop_threshold = 0.01;
};

PerturbationTable perturbation_scan(const ImportMatrix& m, const IncomeModel& model,
                                    const PerturbationOptions& options = {});

/// (node index, percentage) of the largest vulnerability; ties to the lowest
/// index. Raises errc::argument on an empty table.
std::pair<std::size_t, double> max_vulnerability(const PerturbationTable& table);

/// Signed percent change of total income k steps after deleting the (i, j)
/// relationship; negative means income loss.
double link_impact(const ImportMatrix& m, const IncomeModel& model, std::size_t i,
                   std::size_t j, int k);

struct LinkImpactRow {
    std::size_t a = 0;
    std::size_t b = 0;
    double impact_pct = 0.0;      // signed percent change of total income
    double weighted_impact = 0.0; // loss fraction / link's share of total weight
};

struct LinkScanOptions {
    int iterations = 5;
    /// Keep pairs whose loss is at least this fraction of total income
    /// (0.005 = half a percent). Negative values admit every pair.
    double report_threshold = 0.005;
    int threads = 1;
};

/// Evaluates link_impact over every unordered pair with nonzero bilateral
/// weight, keeps those at or past the report threshold and sorts ascending by
/// impact (worst first), ties in lexicographic pair order.
std::vector<LinkImpactRow> link_scan(const ImportMatrix& m, const IncomeModel& model,
                                     const LinkScanOptions& options = {});

enum class NullMode {
    whole_row,    // permute all off-diagonal entries of each row
    nonzero_only, // permute only the nonzero entries among their positions
};

/// Degree-preserving randomization: each row's outgoing weights are permuted
/// over the off-diagonal positions, independently per row, so node count,
/// zero diagonal and every row sum are preserved exactly. Deterministic for a
/// given seed.
ImportMatrix null_model(const ImportMatrix& m, std::uint64_t seed,
                        NullMode mode = NullMode::whole_row);

struct NullBand {
    std::string statistic;
    int trials = 0;
    int successes = 0;
    double mean = 0.0;
    double min = 0.0;
    double max = 0.0;
    double q05 = 0.0; // nearest-rank lower cutoff
    double q95 = 0.0; // nearest-rank upper cutoff
    std::uint64_t seed = 0;
};

/// Evaluates `statistic` on `trials` independent null models (trial t seeded
/// by derive_seed(seed, t)). Failed trials are recorded and the band is
/// computed over the successes. An observed value is significant when
/// strictly outside [q05, q95].
NullBand null_band(const ImportMatrix& m,
                   const std::function<double(const ImportMatrix&)>& statistic,
                   const std::string& name, int trials, std::uint64_t seed,
                   int threads = 1, NullMode mode = NullMode::whole_row);

} // namespace tradeshock

#endif
