#include "tradeshock/model.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <string>

#include "tradeshock/errors.hpp"

namespace tradeshock {

namespace {

// Shared by iterate/iterate_final so both paths produce identical bits:
// incomes[j] = spend_rate[j] * (column sum j) + internal_income[j].
std::vector<double> income_of(const Square& values, const IncomeModel& model) {
    const std::size_t n = model.size();
    std::vector<double> out(n);
    for (std::size_t j = 0; j < n; ++j) {
        double col = 0.0;
        for (std::size_t i = 0; i < n; ++i) col += values(i, j);
        out[j] = model.spend_rate[j] * col + model.internal_income[j];
    }
    return out;
}

Square step_values(const std::vector<double>& incomes, const Square& shares) {
    const std::size_t n = shares.size();
    Square next(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) next(i, j) = incomes[i] * shares(i, j);
    return next;
}

void check_model_dims(const ImportMatrix& m, const IncomeModel& model) {
    if (m.size() != model.size() || model.import_shares.size() != model.size() ||
        model.internal_income.size() != model.size())
        fail(errc::dimension, "matrix and model dimensions do not agree");
}

bool all_finite(const std::vector<double>& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

} // namespace

std::vector<double> in_degree(const ImportMatrix& m) {
    const std::size_t n = m.size();
    std::vector<double> d(n);
    for (std::size_t j = 0; j < n; ++j) d[j] = m.values.col_sum(j);
    return d;
}

std::vector<double> out_degree(const ImportMatrix& m) {
    const std::size_t n = m.size();
    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = m.values.row_sum(i);
    return d;
}

IncomeModel derive_model(const ImportMatrix& m) {
    validate(m);
    const std::size_t n = m.size();
    const std::vector<double> earn = in_degree(m);
    const std::vector<double> spend = out_degree(m);

    IncomeModel model;
    model.labels = m.labels;
    model.spend_rate.resize(n);
    model.internal_income.resize(n);
    model.import_shares = Square(n);

    for (std::size_t i = 0; i < n; ++i) {
        if (earn[i] == 0.0 && spend[i] == 0.0) {
            model.spend_rate[i] = 1.0; // isolated node stays inert
        } else if (earn[i] >= spend[i]) {
            model.spend_rate[i] = spend[i] / earn[i];
        } else {
            model.spend_rate[i] = 1.0;
        }
        model.internal_income[i] = spend[i] > earn[i] ? spend[i] - earn[i] : 0.0;
        if (spend[i] > 0.0)
            for (std::size_t j = 0; j < n; ++j)
                model.import_shares(i, j) = m.values(i, j) / spend[i];
    }
    return model;
}

std::vector<double> income(const ImportMatrix& m, const IncomeModel& model) {
    check_model_dims(m, model);
    return income_of(m.values, model);
}

ImportMatrix step(const std::vector<double>& incomes, const IncomeModel& model) {
    if (incomes.size() != model.size())
        fail(errc::dimension, "income vector length does not match model");
    for (double x : incomes)
        if (!std::isfinite(x) || x < 0.0)
            fail(errc::non_finite, "income entries must be finite and nonnegative");
    return {model.labels, step_values(incomes, model.import_shares), 0};
}

SimulationTrace iterate(const ImportMatrix& shocked, const IncomeModel& model, int k) {
    check_model_dims(shocked, model);
    if (k < 1) fail(errc::argument, "iteration count must be at least 1");

    SimulationTrace trace;
    trace.steps = k;
    trace.matrices.reserve(static_cast<std::size_t>(k));
    trace.incomes.reserve(static_cast<std::size_t>(k));
    trace.matrices.push_back(shocked);
    for (int t = 0; t < k; ++t) {
        trace.incomes.push_back(income_of(trace.matrices.back().values, model));
        if (!all_finite(trace.incomes.back()))
            fail(errc::diverged, "non-finite income at iteration " + std::to_string(t));
        if (t + 1 < k) {
            ImportMatrix next{shocked.labels,
                              step_values(trace.incomes.back(), model.import_shares),
                              shocked.year};
            trace.matrices.push_back(std::move(next));
        }
    }
    return trace;
}

FinalState iterate_final(const ImportMatrix& shocked, const IncomeModel& model, int k) {
    check_model_dims(shocked, model);
    if (k < 1) fail(errc::argument, "iteration count must be at least 1");

    Square values = shocked.values;
    std::vector<double> incomes;
    for (int t = 0; t < k; ++t) {
        incomes = income_of(values, model);
        if (!all_finite(incomes))
            fail(errc::diverged, "non-finite income at iteration " + std::to_string(t));
        if (t + 1 < k) values = step_values(incomes, model.import_shares);
    }
    return {{shocked.labels, std::move(values), shocked.year}, std::move(incomes)};
}

std::vector<double> equilibrium_income(const IncomeModel& model) {
    const std::size_t n = model.size();
    if (n == 0) fail(errc::argument, "empty model");

    Eigen::MatrixXd a(n, n);
    Eigen::VectorXd rhs(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j)
            a(i, j) = model.spend_rate[i] * model.import_shares(j, i) - (i == j ? 1.0 : 0.0);
        rhs(i) = -model.internal_income[i];
    }

    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
    const double rcond = lu.rcond();
    Eigen::VectorXd x;

    if (rcond >= 1e-12 && std::isfinite(rcond)) {
        x = lu.solve(rhs);
    } else {
        bool all_one = true;
        for (double r : model.spend_rate) all_one = all_one && std::abs(r - 1.0) <= 1e-12;
        if (!all_one)
            fail(errc::singular, "equilibrium system is singular or near-singular "
                                 "(condition estimate beyond 1e12)");
        // Every spend rate is 1, so the system necessarily drops rank. A uniform
        // internal-income vector leaves the fixed point undetermined; anything
        // else may still yield a consistent system, solved in least squares.
        double lo = model.internal_income[0], hi = model.internal_income[0];
        for (double b : model.internal_income) {
            lo = std::min(lo, b);
            hi = std::max(hi, b);
        }
        if (hi - lo <= 1e-12 * std::max(1.0, std::abs(hi)))
            fail(errc::singular, "equilibrium income is non-unique: spend rates are all 1 "
                                 "and internal income is uniform");
        x = a.completeOrthogonalDecomposition().solve(rhs);
    }

    const double residual = (a * x - rhs).cwiseAbs().maxCoeff();
    const double scale = std::max({1.0, rhs.cwiseAbs().maxCoeff(), x.cwiseAbs().maxCoeff()});
    if (!std::isfinite(residual) || residual > 1e-9 * scale)
        fail(errc::singular, "equilibrium solve failed the residual check");

    return {x.data(), x.data() + n};
}

} // namespace tradeshock
