#pragma once

#include "adscreen/common/error.hpp"

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace adscreen::statlab {

class StatError : public Error {
public:
    StatError(std::string code, const std::string& message, std::string subject = {})
        : Error(std::move(code), message, std::move(subject)) {}
};

// Regularized incomplete beta I_x(a, b), continued fraction (modified Lentz)
// converged to 1e-10 relative.
double incomplete_beta(double a, double b, double x);

// Student-t CDF with `df` degrees of freedom (df > 0).
double student_t_cdf(double t, double df);

// 2 * (1 - CDF(|t|, df)).
double two_sided_p(double t, double df);

// Row-major design matrix; include an explicit column of ones for an
// intercept.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), values(r * c, 0.0) {}
    double& operator()(std::size_t i, std::size_t j) { return values[i * cols + j]; }
    double operator()(std::size_t i, std::size_t j) const { return values[i * cols + j]; }
};

struct RegressionReport {
    std::vector<std::string> names; // one per coefficient
    std::vector<double> coefficients;
    std::vector<double> std_errors;
    std::vector<double> t_stats;
    std::vector<double> p_values;
    double r_squared = 0.0;
    double rss = 0.0;
    std::size_t n = 0;
    std::size_t k = 0; // regressors, not counting the intercept
    std::size_t df() const { return n - k - 1; }
};

// Plain OLS. X must contain the intercept column; k = X.cols - 1. Throws
// StatError "insufficient_n" (n <= k + 1), "rank_deficient",
// "size_mismatch", "constant_response" (TSS = 0 with a nonzero residual
// model is undefined).
RegressionReport ols_fit(std::span<const double> y, const Matrix& X, std::vector<std::string> names = {});

void write_report_csv(std::ostream& out, const RegressionReport& r);
std::string format_report(const RegressionReport& r);

// Spearman rank correlation (average ranks for ties) with a two-sided
// p-value from the t approximation on n - 2 df. Throws StatError
// "insufficient_n" for n < 3.
struct RankCorrelation {
    double rho = 0.0;
    double p_value = 1.0;
    std::size_t n = 0;
};
RankCorrelation spearman(std::span<const double> x, std::span<const double> y);

// Slope of y on 0..n-1 with its standard error and p-value.
struct Trend {
    double slope = 0.0;
    double std_error = 0.0;
    double p_value = 1.0;
};
Trend linear_trend(std::span<const double> y);

} // namespace adscreen::statlab
