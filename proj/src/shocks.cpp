#include "tradeshock/shocks.hpp"

#include <string>

#include "tradeshock/errors.hpp"

namespace tradeshock {

namespace {

void check_index(const ImportMatrix& m, std::size_t i) {
    if (i >= m.size())
        fail(errc::argument, "node index " + std::to_string(i) + " out of range (n = " +
                                 std::to_string(m.size()) + ")");
}

void check_dims(const ImportMatrix& m, const IncomeModel& model) {
    if (m.size() != model.size())
        fail(errc::dimension, "matrix and model dimensions do not agree");
}

void renormalize_rows(Square& shares) {
    const std::size_t n = shares.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double s = shares.row_sum(i);
        if (s > 0.0)
            for (std::size_t j = 0; j < n; ++j) shares(i, j) /= s;
    }
}

void renormalize_row(Square& shares, std::size_t i) {
    const double s = shares.row_sum(i);
    if (s > 0.0)
        for (std::size_t j = 0; j < shares.size(); ++j) shares(i, j) /= s;
}

} // namespace

ShockedState delete_node(const ImportMatrix& m, const IncomeModel& model, std::size_t i) {
    check_index(m, i);
    check_dims(m, model);

    ShockedState s{m, model, {ShockKind::node_delete, i, ShockDescriptor::npos, 0.0, 0.0}};
    const std::size_t n = m.size();
    for (std::size_t r = 0; r < n; ++r) {
        s.matrix.values(i, r) = 0.0;
        s.matrix.values(r, i) = 0.0;
        s.model.import_shares(i, r) = 0.0;
        s.model.import_shares(r, i) = 0.0;
    }
    renormalize_rows(s.model.import_shares);
    s.model.spend_rate[i] = 0.0;
    s.model.internal_income[i] = 0.0;
    return s;
}

ShockedState perturb_node(const ImportMatrix& m, const IncomeModel& model, std::size_t i,
                          double a, double b) {
    check_index(m, i);
    check_dims(m, model);
    if (a == 0.0 && b == 0.0) return delete_node(m, model, i); // the extreme point
    if (a == 0.0)
        fail(errc::argument, "import scale 0 with nonzero export scale leaves the "
                             "spend-rate adjustment b/a undefined");
    if (a < 0.0 || a > 1.0 || b < 0.0 || b > 1.0)
        fail(errc::argument, "scale factors must lie in [0, 1]");

    ShockedState s{m, model, {ShockKind::node_perturb, i, ShockDescriptor::npos, a, b}};
    if (a == 1.0 && b == 1.0) return s; // identity shock

    const std::size_t n = m.size();
    for (std::size_t r = 0; r < n; ++r) {
        s.matrix.values(i, r) *= a;
        s.model.import_shares(i, r) *= a;
        if (r != i) {
            s.matrix.values(r, i) *= b;
            s.model.import_shares(r, i) *= b;
        }
    }
    renormalize_rows(s.model.import_shares);
    s.model.spend_rate[i] *= b / a; // uncapped, may exceed 1
    return s;
}

ShockedState delete_link(const ImportMatrix& m, const IncomeModel& model, std::size_t i,
                         std::size_t j) {
    check_index(m, i);
    check_index(m, j);
    check_dims(m, model);
    if (i == j) fail(errc::argument, "link endpoints must differ");

    ShockedState s{m, model, {ShockKind::link_delete, std::min(i, j), std::max(i, j), 1.0, 1.0}};
    if (m.values(i, j) == 0.0 && m.values(j, i) == 0.0) return s; // nothing to remove

    s.matrix.values(i, j) = 0.0;
    s.matrix.values(j, i) = 0.0;
    s.model.import_shares(i, j) = 0.0;
    s.model.import_shares(j, i) = 0.0;
    renormalize_row(s.model.import_shares, i);
    renormalize_row(s.model.import_shares, j);
    return s;
}

} // namespace tradeshock
