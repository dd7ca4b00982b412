#ifndef TRADESHOCK_MODEL_HPP
#define TRADESHOCK_MODEL_HPP

#include <string>
#include <vector>

#include "tradeshock/matrix.hpp"

namespace tradeshock {

/// The income model derived from an import matrix and held fixed while the
/// rebalancing dynamics run:
///   spend_rate       fraction of export income re-spent on imports,
///   internal_income  domestic production funding spending beyond income,
///   import_shares    row-stochastic mix of partners each country buys from
///                    (rows sum to 1, or are all-zero for a country that
///                    spends nothing).
struct IncomeModel {
    std::vector<double> spend_rate;
    std::vector<double> internal_income;
    Square import_shares;
    std::vector<std::string> labels;

    std::size_t size() const noexcept { return spend_rate.size(); }
};

/// Column sums of M: each country's export income.
std::vector<double> in_degree(const ImportMatrix& m);

/// Row sums of M: each country's import spending.
std::vector<double> out_degree(const ImportMatrix& m);

/// Derives (spend_rate, internal_income, import_shares) from an import
/// matrix. Conventions for degenerate rows: a country that earns but spends
/// nothing gets spend_rate 0; a fully isolated country gets spend_rate 1,
/// internal_income 0 and an all-zero share row, which keeps the identity
/// out_degree = spend_rate * in_degree + internal_income intact and makes
/// deleted nodes inert.
IncomeModel derive_model(const ImportMatrix& m);

/// Income generated by matrix M under the model:
/// spend_rate (.) column sums of M + internal_income.
std::vector<double> income(const ImportMatrix& m, const IncomeModel& model);

/// Next import matrix from an income vector: row i = income[i] * share row i.
/// Incomes must be finite and nonnegative.
ImportMatrix step(const std::vector<double>& incomes, const IncomeModel& model);

/// Trajectory of a k-step rebalancing run. matrices[0] is the shocked matrix,
/// incomes[t] is the income generated by matrices[t], and
/// matrices[t+1] = step(incomes[t]). Both sequences have k entries, so
/// incomes.back() is the k-th post-shock income.
struct SimulationTrace {
    std::vector<ImportMatrix> matrices;
    std::vector<std::vector<double>> incomes;
    int steps = 0;
};

/// Runs k income/matrix updates from a shocked matrix under a fixed
/// (shock-adjusted) model. Non-finite values raise errc::diverged carrying
/// the iteration index. k >= 1.
SimulationTrace iterate(const ImportMatrix& shocked, const IncomeModel& model, int k);

/// Final state of the same recursion without storing the trajectory; bitwise
/// identical to iterate(...) at the last step.
struct FinalState {
    ImportMatrix matrix;
    std::vector<double> incomes;
};
FinalState iterate_final(const ImportMatrix& shocked, const IncomeModel& model, int k);

/// Closed-form fixed point of the dynamics, by dense LU solve of
/// (diag(spend_rate) * import_shares^T - I) x = -internal_income.
/// Raises errc::singular when the condition estimate exceeds 1e12, except for
/// the all-spend-rate-one case where a consistent system is still solved
/// (least squares) and only a uniform internal_income is reported non-unique.
std::vector<double> equilibrium_income(const IncomeModel& model);

} // namespace tradeshock

#endif
