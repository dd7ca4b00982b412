#include "tradeshock/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "tradeshock/errors.hpp"
#include "tradeshock/parallel.hpp"
#include "tradeshock/rng.hpp"
#include "tradeshock/shocks.hpp"

namespace tradeshock {

namespace {

double sum(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
}

// Power of deleting node i from an arbitrary working state, measured against
// the given baseline sum. Shared by node_power and the MEA rounds.
double power_against(const ImportMatrix& m, const IncomeModel& model, std::size_t i, int k,
                     double baseline_sum) {
    const ShockedState shocked = delete_node(m, model, i);
    const FinalState fin = iterate_final(shocked.matrix, shocked.model, k);
    return 1.0 - sum(fin.incomes) / baseline_sum;
}

} // namespace

double node_power(const ImportMatrix& m, const IncomeModel& model, std::size_t i, int k) {
    const double baseline = sum(income(m, model));
    if (!(baseline > 0.0))
        fail(errc::degenerate_baseline, "baseline income sum is not positive");
    return power_against(m, model, i, k, baseline);
}

MEAResult mea(const ImportMatrix& m, const MEAOptions& options) {
    validate(m);
    const std::size_t n = m.size();
    IncomeModel model = derive_model(m);
    const std::vector<double> original_income = income(m, model);
    const double original_total = sum(original_income);
    if (!(original_total > 0.0))
        fail(errc::degenerate_baseline, "total income of the input matrix is not positive");

    MEAResult result;
    ImportMatrix working = m;
    std::vector<double> base_income = original_income;
    std::vector<std::size_t> live(n);
    std::iota(live.begin(), live.end(), std::size_t{0});

    while (!live.empty()) {
        const double base_sum = sum(base_income);
        if (!(base_sum > 0.0))
            fail(errc::degenerate_baseline,
                 "working income vanished before crossing the stop threshold");

        std::vector<double> power(live.size());
        parallel_for(live.size(), options.threads, [&](std::size_t idx) {
            power[idx] = power_against(working, model, live[idx], options.iterations, base_sum);
        });

        std::size_t best = 0;
        for (std::size_t idx = 1; idx < live.size(); ++idx)
            if (power[idx] > power[best]) best = idx; // ties keep the lowest node index
        const std::size_t victim = live[best];

        const ShockedState shocked = delete_node(working, model, victim);
        FinalState fin = iterate_final(shocked.matrix, shocked.model, options.iterations);

        result.deletion_order.push_back(victim);
        result.deleted_labels.push_back(m.labels[victim]);
        result.pow_at_step.push_back(power[best]);

        working = std::move(fin.matrix);
        model = shocked.model;
        base_income = std::move(fin.incomes);
        live.erase(live.begin() + static_cast<std::ptrdiff_t>(best));

        const double fraction = sum(base_income) / original_total;
        result.income_fraction_trace.push_back(fraction);
        if (fraction < options.stop_fraction) {
            double deleted = 0.0;
            for (std::size_t j : result.deletion_order) deleted += original_income[j];
            result.robustness = deleted / original_total;
            return result;
        }
    }
    fail(errc::exhausted, "every node deleted without the income fraction crossing " +
                              std::to_string(options.stop_fraction));
}

std::vector<YearOutcome> robustness_timeseries(std::span<const ImportMatrix> series,
                                               const MEAOptions& options) {
    std::vector<YearOutcome> out;
    out.reserve(series.size());
    for (const ImportMatrix& m : series) {
        YearOutcome y;
        y.year = m.year;
        try {
            y.result = mea(m, options);
        } catch (const error& e) {
            y.error = e.what();
        }
        out.push_back(std::move(y));
    }
    return out;
}

PerturbationTable perturbation_scan(const ImportMatrix& m, const IncomeModel& model,
                                    const PerturbationOptions& options) {
    const std::size_t n = m.size();
    const std::vector<double> baseline = income(m, model);

    PerturbationTable table;
    table.labels = m.labels;
    table.import_scale = options.import_scale;
    table.export_scale = options.export_scale;
    table.drop_threshold = options.drop_threshold;
    table.row_errors.assign(n, std::string());

    // dropped[i*n + j]: does shocking i push j's income below the threshold?
    std::vector<char> dropped(n * n, 0);
    parallel_for(n, options.threads, [&](std::size_t i) {
        try {
            const ShockedState shocked =
                perturb_node(m, model, i, options.import_scale, options.export_scale);
            const FinalState fin = iterate_final(shocked.matrix, shocked.model, options.iterations);
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i || baseline[j] <= 0.0) continue;
                if (fin.incomes[j] < (1.0 - options.drop_threshold) * baseline[j])
                    dropped[i * n + j] = 1;
            }
        } catch (const error& e) {
            table.row_errors[i] = e.what();
        }
    });

    table.power_pct.resize(n);
    table.vulnerability_pct.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t count = 0;
        for (std::size_t j = 0; j < n; ++j) count += dropped[i * n + j];
        table.power_pct[i] = 100.0 * static_cast<double>(count) / static_cast<double>(n);
    }
    for (std::size_t j = 0; j < n; ++j) {
        std::size_t count = 0;
        for (std::size_t i = 0; i < n; ++i) count += dropped[i * n + j];
        table.vulnerability_pct[j] = 100.0 * static_cast<double>(count) / static_cast<double>(n);
    }
    return table;
}

std::pair<std::size_t, double> max_vulnerability(const PerturbationTable& table) {
    if (table.vulnerability_pct.empty()) fail(errc::argument, "empty perturbation table");
    std::size_t best = 0;
    for (std::size_t j = 1; j < table.vulnerability_pct.size(); ++j)
        if (table.vulnerability_pct[j] > table.vulnerability_pct[best]) best = j;
    return {best, table.vulnerability_pct[best]};
}

double link_impact(const ImportMatrix& m, const IncomeModel& model, std::size_t i,
                   std::size_t j, int k) {
    const std::vector<double> baseline = income(m, model);
    const double base_sum = sum(baseline);
    if (!(base_sum > 0.0))
        fail(errc::degenerate_baseline, "baseline income sum is not positive");
    const ShockedState shocked = delete_link(m, model, i, j);
    const FinalState fin = iterate_final(shocked.matrix, shocked.model, k);
    return 100.0 * (sum(fin.incomes) - base_sum) / base_sum;
}

std::vector<LinkImpactRow> link_scan(const ImportMatrix& m, const IncomeModel& model,
                                     const LinkScanOptions& options) {
    const std::size_t n = m.size();
    const double total_weight = m.values.total();

    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (m.values(i, j) + m.values(j, i) > 0.0) pairs.emplace_back(i, j);

    std::vector<LinkImpactRow> rows(pairs.size());
    parallel_for(pairs.size(), options.threads, [&](std::size_t p) {
        const auto [i, j] = pairs[p];
        const double impact = link_impact(m, model, i, j, options.iterations);
        const double weight_fraction = (m.values(i, j) + m.values(j, i)) / total_weight;
        double weighted = (-impact / 100.0) / weight_fraction;
        if (weighted == 0.0) weighted = 0.0; // strip the sign off -0
        rows[p] = {i, j, impact, weighted};
    });

    std::vector<LinkImpactRow> kept;
    for (const auto& r : rows)
        if (r.impact_pct / 100.0 <= -options.report_threshold) kept.push_back(r);
    std::sort(kept.begin(), kept.end(), [](const LinkImpactRow& x, const LinkImpactRow& y) {
        if (x.impact_pct != y.impact_pct) return x.impact_pct < y.impact_pct;
        if (x.a != y.a) return x.a < y.a;
        return x.b < y.b;
    });
    return kept;
}

ImportMatrix null_model(const ImportMatrix& m, std::uint64_t seed, NullMode mode) {
    validate(m);
    const std::size_t n = m.size();
    if (n < 2) fail(errc::argument, "null model needs at least two nodes");

    ImportMatrix out = m;
    std::mt19937_64 gen(seed);
    std::vector<double> slots;
    std::vector<std::size_t> positions;
    for (std::size_t i = 0; i < n; ++i) {
        slots.clear();
        positions.clear();
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            if (mode == NullMode::nonzero_only && m.values(i, j) == 0.0) continue;
            positions.push_back(j);
            slots.push_back(m.values(i, j));
        }
        shuffle_span(std::span<double>(slots), gen);
        for (std::size_t k = 0; k < positions.size(); ++k)
            out.values(i, positions[k]) = slots[k];
    }
    return out;
}

NullBand null_band(const ImportMatrix& m,
                   const std::function<double(const ImportMatrix&)>& statistic,
                   const std::string& name, int trials, std::uint64_t seed, int threads,
                   NullMode mode) {
    if (trials < 2) fail(errc::argument, "null bands need at least 2 trials");

    std::vector<double> values(static_cast<std::size_t>(trials));
    std::vector<char> ok(static_cast<std::size_t>(trials), 0);
    parallel_for(static_cast<std::size_t>(trials), threads, [&](std::size_t t) {
        try {
            values[t] = statistic(null_model(m, derive_seed(seed, t), mode));
            ok[t] = 1;
        } catch (const error&) {
            ok[t] = 0; // recorded via the success count
        }
    });

    std::vector<double> good;
    good.reserve(values.size());
    for (std::size_t t = 0; t < values.size(); ++t)
        if (ok[t]) good.push_back(values[t]);
    if (good.empty())
        fail(errc::degenerate_baseline, "statistic failed on every null-model trial");

    std::sort(good.begin(), good.end());
    const std::size_t s = good.size();
    auto nearest_rank = [&](double q) {
        const std::size_t rank =
            std::max<std::size_t>(1, static_cast<std::size_t>(
                                         std::ceil(q * static_cast<double>(s))));
        return good[std::min(rank, s) - 1];
    };

    NullBand band;
    band.statistic = name;
    band.trials = trials;
    band.successes = static_cast<int>(s);
    band.min = good.front();
    band.max = good.back();
    band.mean = sum(good) / static_cast<double>(s);
    band.q05 = nearest_rank(0.05);
    band.q95 = nearest_rank(0.95);
    band.seed = seed;
    return band;
}

} // namespace tradeshock
