#ifndef TRADESHOCK_METRICS_HPP
#define TRADESHOCK_METRICS_HPP

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "tradeshock/matrix.hpp"

namespace tradeshock {

/// Share of realized directed edges: strictly positive off-diagonal entries
/// divided by n^2 (self-pairs included in the denominator).
double connectance(const ImportMatrix& m);

/// (node, value) maximizing in_degree - out_degree; ties to the lowest index.
std::pair<std::size_t, double> max_trade_deficit(const ImportMatrix& m);

/// (node, value) maximizing out_degree - in_degree; ties to the lowest index.
std::pair<std::size_t, double> max_trade_surplus(const ImportMatrix& m);

struct FitResult {
    std::vector<double> coefficients; // intercept first, ascending degree
    double r_squared = 0.0;
    double p_value = 1.0;
    std::size_t n = 0;
};

/// Ordinary least squares line. p-value is the two-sided slope t-test with
/// n-2 degrees of freedom. Constant y yields slope 0, R^2 0, p 1; constant x
/// raises errc::argument, as does n < 3.
FitResult linear_fit(std::span<const double> x, std::span<const double> y);

/// Degree-2 least squares via QR. p-value is the overall F-test against the
/// intercept-only model (2 and n-3 degrees of freedom). Requires n >= 4 and
/// at least three distinct x values.
FitResult quadratic_fit(std::span<const double> x, std::span<const double> y);

} // namespace tradeshock

#endif
