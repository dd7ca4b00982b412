#ifndef TRADESHOCK_MATRIX_HPP
#define TRADESHOCK_MATRIX_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "tradeshock/errors.hpp"

namespace tradeshock {

/// Dense square grid of doubles, row-major. Used both for import matrices
/// (currency units) and for row-stochastic propensity tables.
class Square {
public:
    Square() = default;
    explicit Square(std::size_t n, double fill = 0.0) : n_(n), v_(n * n, fill) {}

    std::size_t size() const noexcept { return n_; }

    double operator()(std::size_t i, std::size_t j) const { return v_[i * n_ + j]; }
    double& operator()(std::size_t i, std::size_t j) { return v_[i * n_ + j]; }

    const std::vector<double>& data() const noexcept { return v_; }
    std::vector<double>& data() noexcept { return v_; }

    double row_sum(std::size_t i) const {
        double s = 0.0;
        for (std::size_t j = 0; j < n_; ++j) s += v_[i * n_ + j];
        return s;
    }

    double col_sum(std::size_t j) const {
        double s = 0.0;
        for (std::size_t i = 0; i < n_; ++i) s += v_[i * n_ + j];
        return s;
    }

    double total() const {
        double s = 0.0;
        for (double x : v_) s += x;
        return s;
    }

    bool operator==(const Square& other) const = default;

private:
    std::size_t n_ = 0;
    std::vector<double> v_;
};

/// Labeled import matrix for one year: values(i, j) is the value of imports
/// into country i from country j. Entries are nonnegative, the diagonal is
/// zero and labels are unique.
struct ImportMatrix {
    std::vector<std::string> labels;
    Square values;
    int year = 0;

    std::size_t size() const noexcept { return labels.size(); }
};

/// Throws error(errc::argument) unless the matrix invariants hold.
void validate(const ImportMatrix& m);

} // namespace tradeshock

#endif
