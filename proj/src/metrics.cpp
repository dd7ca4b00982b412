#include "tradeshock/metrics.hpp"

#include <Eigen/Dense>
#include <boost/math/distributions/fisher_f.hpp>
#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <cmath>
#include <set>

#include "tradeshock/errors.hpp"
#include "tradeshock/model.hpp"

namespace tradeshock {

double connectance(const ImportMatrix& m) {
    const std::size_t n = m.size();
    if (n == 0) fail(errc::argument, "empty matrix");
    std::size_t edges = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j && m.values(i, j) > 0.0) ++edges;
    return static_cast<double>(edges) / (static_cast<double>(n) * static_cast<double>(n));
}

namespace {

std::pair<std::size_t, double> arg_max(const std::vector<double>& v) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i] > v[best]) best = i;
    return {best, v[best]};
}

double clamp01(double x) { return std::min(1.0, std::max(0.0, x)); }

} // namespace

std::pair<std::size_t, double> max_trade_deficit(const ImportMatrix& m) {
    if (m.size() == 0) fail(errc::argument, "empty matrix");
    const std::vector<double> earn = in_degree(m);
    const std::vector<double> spend = out_degree(m);
    std::vector<double> gap(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) gap[i] = earn[i] - spend[i];
    return arg_max(gap);
}

std::pair<std::size_t, double> max_trade_surplus(const ImportMatrix& m) {
    if (m.size() == 0) fail(errc::argument, "empty matrix");
    const std::vector<double> earn = in_degree(m);
    const std::vector<double> spend = out_degree(m);
    std::vector<double> gap(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) gap[i] = spend[i] - earn[i];
    return arg_max(gap);
}

FitResult linear_fit(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) fail(errc::dimension, "sample vectors differ in length");
    const std::size_t n = x.size();
    if (n < 3) fail(errc::argument, "linear fit needs at least 3 samples");

    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);

    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx <= 0.0) fail(errc::argument, "degenerate regressor: x is constant");

    FitResult fit;
    fit.n = n;
    if (syy <= 0.0) {
        fit.coefficients = {my, 0.0};
        fit.r_squared = 0.0;
        fit.p_value = 1.0;
        return fit;
    }

    const double slope = sxy / sxx;
    const double intercept = my - slope * mx;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - (intercept + slope * x[i]);
        ss_res += r * r;
    }
    fit.coefficients = {intercept, slope};
    fit.r_squared = clamp01(1.0 - ss_res / syy);

    const double dof = static_cast<double>(n) - 2.0;
    const double se2 = ss_res / dof / sxx;
    if (se2 <= 0.0) {
        fit.p_value = slope == 0.0 ? 1.0 : 0.0; // exact fit
    } else {
        const double t = std::abs(slope) / std::sqrt(se2);
        const boost::math::students_t dist(dof);
        fit.p_value = 2.0 * boost::math::cdf(boost::math::complement(dist, t));
    }
    return fit;
}

FitResult quadratic_fit(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) fail(errc::dimension, "sample vectors differ in length");
    const std::size_t n = x.size();
    if (n < 4) fail(errc::argument, "quadratic fit needs at least 4 samples");
    if (std::set<double>(x.begin(), x.end()).size() < 3)
        fail(errc::argument, "degenerate regressor: fewer than 3 distinct x values");

    Eigen::MatrixXd design(n, 3);
    Eigen::VectorXd rhs(n);
    for (std::size_t i = 0; i < n; ++i) {
        design(i, 0) = 1.0;
        design(i, 1) = x[i];
        design(i, 2) = x[i] * x[i];
        rhs(i) = y[i];
    }
    const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    if (qr.rank() < 3) fail(errc::argument, "degenerate regressor: design matrix rank-deficient");
    const Eigen::VectorXd coeff = qr.solve(rhs);

    const double my = rhs.mean();
    const double ss_tot = (rhs.array() - my).square().sum();
    const double ss_res = (design * coeff - rhs).squaredNorm();

    FitResult fit;
    fit.n = n;
    fit.coefficients = {coeff(0), coeff(1), coeff(2)};
    if (ss_tot <= 0.0) {
        fit.r_squared = 0.0;
        fit.p_value = 1.0;
        return fit;
    }
    fit.r_squared = clamp01(1.0 - ss_res / ss_tot);

    const double dof = static_cast<double>(n) - 3.0;
    if (fit.r_squared >= 1.0) {
        fit.p_value = 0.0;
    } else {
        const double f = (fit.r_squared / 2.0) / ((1.0 - fit.r_squared) / dof);
        const boost::math::fisher_f dist(2.0, dof);
        fit.p_value = boost::math::cdf(boost::math::complement(dist, f));
    }
    return fit;
}

} // namespace tradeshock
