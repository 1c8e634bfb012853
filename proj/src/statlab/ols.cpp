#include "adscreen/statlab/statlab.hpp"

#include "adscreen/common/io.hpp"

#include <Eigen/Dense>
#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>

namespace adscreen::statlab {

RegressionReport ols_fit(std::span<const double> y, const Matrix& X, std::vector<std::string> names) {
    const std::size_t n = X.rows, p = X.cols;
    if (y.size() != n || X.values.size() != n * p)
        throw StatError("size_mismatch", fmt::format("response has {} rows, design has {}", y.size(), n));
    if (p == 0) throw StatError("size_mismatch", "design matrix has no columns");
    if (n <= p) throw StatError("insufficient_n", fmt::format("need more than {} observations, got {}", p, n));
    if (names.empty())
        for (std::size_t j = 0; j < p; ++j) names.push_back(j == 0 ? "intercept" : fmt::format("x{}", j));
    if (names.size() != p) throw StatError("size_mismatch", "one name per design column is required");
    for (double v : X.values)
        if (!std::isfinite(v)) throw StatError("non_finite", "design matrix contains a non-finite value");
    for (double v : y)
        if (!std::isfinite(v)) throw StatError("non_finite", "response contains a non-finite value");

    using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    const Eigen::Map<const RowMajor> A(X.values.data(), static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
    const Eigen::Map<const Eigen::VectorXd> b(y.data(), static_cast<Eigen::Index>(n));

    const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
    if (qr.rank() < static_cast<Eigen::Index>(p))
        throw StatError("rank_deficient",
                        fmt::format("design matrix has rank {} but {} columns", qr.rank(), p));
    const Eigen::VectorXd beta = qr.solve(b);
    const Eigen::VectorXd resid = b - A * beta;

    RegressionReport r;
    r.names = std::move(names);
    r.n = n;
    r.k = p - 1;
    r.rss = resid.squaredNorm();
    const double mean = b.mean();
    const double tss = (b.array() - mean).square().sum();
    if (tss == 0.0) throw StatError("constant_response", "response has zero variance; R^2 is undefined");
    r.r_squared = std::clamp(1.0 - r.rss / tss, 0.0, 1.0);

    // (X'X)^-1 = P R^-1 R^-T P' from the pivoted QR factors.
    const Eigen::MatrixXd R =
        qr.matrixR().topLeftCorner(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p))
            .triangularView<Eigen::Upper>();
    const Eigen::MatrixXd Rinv = R.triangularView<Eigen::Upper>().solve(
        Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p)));
    const Eigen::MatrixXd perm_cov = Rinv * Rinv.transpose();
    const auto& P = qr.colsPermutation();
    const Eigen::MatrixXd xtx_inv = P * perm_cov * P.transpose();

    const double df = static_cast<double>(r.df());
    const double sigma2 = r.rss / df;
    for (std::size_t j = 0; j < p; ++j) {
        const auto jj = static_cast<Eigen::Index>(j);
        const double coef = beta(jj);
        const double se = std::sqrt(std::max(0.0, sigma2 * xtx_inv(jj, jj)));
        double t, pv;
        if (se > 0.0) {
            t = coef / se;
            pv = two_sided_p(t, df);
        } else if (coef == 0.0) {
            t = 0.0;
            pv = 1.0;
        } else {
            t = std::copysign(std::numeric_limits<double>::infinity(), coef);
            pv = 0.0;
        }
        r.coefficients.push_back(coef);
        r.std_errors.push_back(se);
        r.t_stats.push_back(t);
        r.p_values.push_back(pv);
    }
    return r;
}

void write_report_csv(std::ostream& out, const RegressionReport& r) {
    out << "term,coefficient,std_error,t,p_value\n";
    for (std::size_t j = 0; j < r.coefficients.size(); ++j)
        out << r.names[j] << ',' << format_double(r.coefficients[j]) << ',' << format_double(r.std_errors[j]) << ','
            << format_double(r.t_stats[j]) << ',' << format_double(r.p_values[j]) << '\n';
}

std::string format_report(const RegressionReport& r) {
    std::size_t w = 4;
    for (const auto& name : r.names) w = std::max(w, name.size());
    std::string out = fmt::format("{:<{}} {:>12} {:>12} {:>8} {:>8}\n", "term", w, "estimate", "std.error", "t", "p");
    for (std::size_t j = 0; j < r.coefficients.size(); ++j)
        out += fmt::format("{:<{}} {:>12.6g} {:>12.6g} {:>8.3f} {:>8.4f}\n", r.names[j], w, r.coefficients[j],
                           r.std_errors[j], r.t_stats[j], r.p_values[j]);
    out += fmt::format("n = {}, k = {}, df = {}, R^2 = {:.4f}\n", r.n, r.k, r.df(), r.r_squared);
    return out;
}

} // namespace adscreen::statlab
