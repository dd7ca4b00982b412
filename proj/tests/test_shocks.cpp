#include <cmath>

#include "doctest.h"
#include "fixtures.hpp"
#include "tradeshock/errors.hpp"
#include "tradeshock/model.hpp"
#include "tradeshock/shocks.hpp"

using namespace tradeshock;

namespace {

void check_rows_stochastic(const Square& shares) {
    for (std::size_t i = 0; i < shares.size(); ++i) {
        const double s = shares.row_sum(i);
        CHECK((s == 0.0 || std::abs(s - 1.0) <= 1e-12));
    }
}

} // namespace

TEST_CASE("deleting node 2 of the triangle") {
    const ImportMatrix tri = fixtures::triangle();
    const IncomeModel model = derive_model(tri);
    const ShockedState s = delete_node(tri, model, 1);

    const double want_m[3][3] = {{0, 0, 1}, {0, 0, 0}, {1, 0, 0}};
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) {
            CHECK(s.model.import_shares(i, j) == doctest::Approx(want_m[i][j]));
            if (i == 1 || j == 1) CHECK(s.matrix.values(i, j) == 0.0);
        }
    CHECK(s.model.spend_rate == std::vector<double>{1, 0, 1});
    CHECK(s.model.internal_income == std::vector<double>{1, 0, 1});
    CHECK(s.shock.kind == ShockKind::node_delete);

    // inputs untouched
    CHECK(tri.values(0, 1) == 2.0);
    CHECK(model.spend_rate[1] == 0.5);
}

TEST_CASE("deleting node 1 of the triangle") {
    const ImportMatrix tri = fixtures::triangle();
    const ShockedState s = delete_node(tri, derive_model(tri), 0);
    const double want_m[3][3] = {{0, 0, 0}, {0, 0, 1}, {0, 1, 0}};
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            CHECK(s.model.import_shares(i, j) == doctest::Approx(want_m[i][j]));
    CHECK(s.model.spend_rate == std::vector<double>{0, 0.5, 1});
    CHECK(s.model.internal_income == std::vector<double>{0, 0, 1});
}

TEST_CASE("deleting half of the balanced pair leaves nothing") {
    const ImportMatrix bal = fixtures::balanced_pair();
    const ShockedState s = delete_node(bal, derive_model(bal), 1);
    CHECK(s.matrix.values.total() == 0.0);
    CHECK(s.model.import_shares.total() == 0.0);
    CHECK(s.model.spend_rate == std::vector<double>{1, 0});
    CHECK(s.model.internal_income == std::vector<double>{0, 0});
}

TEST_CASE("deleted node keeps zero income through the iteration") {
    const ImportMatrix m = fixtures::random_nonempty(6, 0.8, 5);
    const ShockedState s = delete_node(m, derive_model(m), 2);
    const SimulationTrace trace = iterate(s.matrix, s.model, 8);
    for (const auto& inc : trace.incomes) CHECK(inc[2] == 0.0);
}

TEST_CASE("node index out of range") {
    const ImportMatrix tri = fixtures::triangle();
    CHECK_THROWS_AS(delete_node(tri, derive_model(tri), 3), error);
}

TEST_CASE("identity perturbation returns the inputs unchanged") {
    const ImportMatrix tri = fixtures::triangle();
    const IncomeModel model = derive_model(tri);
    const ShockedState s = perturb_node(tri, model, 1, 1.0, 1.0);
    CHECK(s.matrix.values == tri.values);
    CHECK(s.model.import_shares == model.import_shares);
    CHECK(s.model.spend_rate == model.spend_rate);
    CHECK(s.model.internal_income == model.internal_income);
}

TEST_CASE("thirty percent import drop, five percent export drop") {
    const ImportMatrix bal = fixtures::balanced_pair();
    const IncomeModel model = derive_model(bal);
    const ShockedState s = perturb_node(bal, model, 0, 0.7, 0.95);

    CHECK(s.matrix.values(0, 1) == doctest::Approx(3.5));
    CHECK(s.matrix.values(1, 0) == doctest::Approx(4.75));
    CHECK(s.model.import_shares(0, 1) == doctest::Approx(1.0));
    CHECK(s.model.import_shares(1, 0) == doctest::Approx(1.0));
    CHECK(s.model.spend_rate[0] == doctest::Approx(0.95 / 0.7)); // uncapped
    CHECK(s.model.spend_rate[1] == doctest::Approx(1.0));
    CHECK(s.model.internal_income == std::vector<double>{0, 0});

    const std::vector<double> first = income(s.matrix, s.model);
    CHECK(first[0] == doctest::Approx(0.95 / 0.7 * 4.75));
    CHECK(first[1] == doctest::Approx(3.5));
}

TEST_CASE("symmetric perturbation of the triangle's second node") {
    const ImportMatrix tri = fixtures::triangle();
    const ShockedState s = perturb_node(tri, derive_model(tri), 1, 0.5, 0.5);
    const double want_matrix[3][3] = {{0, 1, 1}, {0.5, 0, 0.5}, {1, 1, 0}};
    const double want_shares[3][3] = {{0, 0.5, 0.5}, {0.5, 0, 0.5}, {0.5, 0.5, 0}};
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) {
            CHECK(s.matrix.values(i, j) == doctest::Approx(want_matrix[i][j]));
            CHECK(s.model.import_shares(i, j) == doctest::Approx(want_shares[i][j]));
        }
    CHECK(s.model.spend_rate[1] == doctest::Approx(0.5)); // b/a = 1
}

TEST_CASE("zero import scale with exports intact is rejected") {
    const ImportMatrix tri = fixtures::triangle();
    const IncomeModel model = derive_model(tri);
    CHECK_THROWS_AS(perturb_node(tri, model, 0, 0.0, 0.5), error);
}

TEST_CASE("a = b = 0 routes to node deletion") {
    const ImportMatrix tri = fixtures::triangle();
    const IncomeModel model = derive_model(tri);
    const ShockedState direct = delete_node(tri, model, 1);
    const ShockedState routed = perturb_node(tri, model, 1, 0.0, 0.0);
    CHECK(routed.shock.kind == ShockKind::node_delete);
    CHECK(routed.matrix.values == direct.matrix.values);
    CHECK(routed.model.import_shares == direct.model.import_shares);
}

TEST_CASE("removing the only link of the balanced pair") {
    const ImportMatrix bal = fixtures::balanced_pair();
    const IncomeModel model = derive_model(bal);
    const ShockedState s = delete_link(bal, model, 0, 1);
    CHECK(s.matrix.values.total() == 0.0);
    CHECK(s.model.import_shares.total() == 0.0);
    CHECK(s.model.spend_rate == model.spend_rate);
    CHECK(s.model.internal_income == model.internal_income);
    const SimulationTrace trace = iterate(s.matrix, s.model, 5);
    for (const auto& inc : trace.incomes) CHECK(inc == std::vector<double>{0, 0});
}

TEST_CASE("removing the 1-2 link of the triangle") {
    const ImportMatrix tri = fixtures::triangle();
    const ShockedState s = delete_link(tri, derive_model(tri), 0, 1);
    const double want_m[3][3] = {{0, 0, 1}, {0, 0, 1}, {1.0 / 3, 2.0 / 3, 0}};
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            CHECK(s.model.import_shares(i, j) == doctest::Approx(want_m[i][j]));
    const std::vector<double> first = income(s.matrix, s.model);
    CHECK(first[0] == doctest::Approx(2.0));
    CHECK(first[1] == doctest::Approx(1.0));
    CHECK(first[2] == doctest::Approx(3.0));
}

TEST_CASE("sequential link removals can empty a share row") {
    const ImportMatrix tri = fixtures::triangle();
    const ShockedState first = delete_link(tri, derive_model(tri), 0, 2);
    const ShockedState second = delete_link(first.matrix, first.model, 0, 1);
    CHECK(second.model.import_shares.row_sum(0) == 0.0);
}

TEST_CASE("link deletion is symmetric in its arguments") {
    const ImportMatrix m = fixtures::random_nonempty(7, 0.6, 17);
    const IncomeModel model = derive_model(m);
    const ShockedState ab = delete_link(m, model, 2, 5);
    const ShockedState ba = delete_link(m, model, 5, 2);
    CHECK(ab.matrix.values == ba.matrix.values);
    CHECK(ab.model.import_shares == ba.model.import_shares);
}

TEST_CASE("self-link deletion is rejected") {
    const ImportMatrix tri = fixtures::triangle();
    CHECK_THROWS_AS(delete_link(tri, derive_model(tri), 1, 1), error);
}

TEST_CASE("share rows stay stochastic or empty under random shock chains") {
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        const ImportMatrix m = fixtures::random_nonempty(6, 0.3 + 0.07 * (seed % 10), seed);
        IncomeModel model = derive_model(m);
        ImportMatrix current = m;
        std::mt19937_64 gen(seed);
        for (int round = 0; round < 4; ++round) {
            const std::size_t i = gen() % m.size();
            std::size_t j = gen() % m.size();
            if (j == i) j = (j + 1) % m.size();
            ShockedState s = [&] {
                switch (gen() % 3) {
                case 0: return delete_node(current, model, i);
                case 1: return perturb_node(current, model, i, 0.75, 0.5);
                default: return delete_link(current, model, i, j);
                }
            }();
            check_rows_stochastic(s.model.import_shares);
            current = s.matrix;
            model = s.model;
        }
    }
}
