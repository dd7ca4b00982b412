#ifndef TRADESHOCK_TESTS_FIXTURES_HPP
#define TRADESHOCK_TESTS_FIXTURES_HPP

#include <random>
#include <string>
#include <vector>

#include "tradeshock/matrix.hpp"
#include "tradeshock/rng.hpp"

namespace fixtures {

using tradeshock::ImportMatrix;
using tradeshock::Square;

inline ImportMatrix from_rows(std::vector<std::vector<double>> rows, int year = 2006) {
    ImportMatrix m;
    m.year = year;
    const std::size_t n = rows.size();
    m.values = Square(n);
    for (std::size_t i = 0; i < n; ++i) {
        m.labels.push_back(std::string(1, static_cast<char>('A' + i)));
        for (std::size_t j = 0; j < n; ++j) m.values(i, j) = rows[i][j];
    }
    return m;
}

/// Three-country triangle used throughout the unit tests; every expected
/// value asserted against it was computed by hand and re-checked with an
/// independent brute-force script.
inline ImportMatrix triangle() {
    return from_rows({{0, 2, 1}, {1, 0, 1}, {1, 2, 0}});
}

/// Two countries with equal flows in both directions.
inline ImportMatrix balanced_pair(double w = 5.0) {
    return from_rows({{0, w}, {w, 0}});
}

/// Seeded random import matrix: each off-diagonal entry present with the
/// given density, weights uniform in [0.1, 10).
inline ImportMatrix random_matrix(std::size_t n, double density, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    auto unit = [&gen] {
        return static_cast<double>(gen()) / static_cast<double>(std::mt19937_64::max());
    };
    ImportMatrix m;
    m.year = 2000;
    m.values = Square(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::string label = "C";
        label += std::to_string(i);
        m.labels.push_back(label);
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j && unit() < density) m.values(i, j) = 0.1 + 9.9 * unit();
    return m;
}

/// Random matrix with at least one positive entry.
inline ImportMatrix random_nonempty(std::size_t n, double density, std::uint64_t seed) {
    for (std::uint64_t bump = 0;; ++bump) {
        ImportMatrix m = random_matrix(n, density, tradeshock::derive_seed(seed, bump));
        if (m.values.total() > 0.0) return m;
    }
}

} // namespace fixtures

#endif
