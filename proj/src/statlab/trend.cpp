#include "adscreen/statlab/statlab.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace adscreen::statlab {
namespace {

std::vector<double> average_ranks(std::span<const double> v) {
    std::vector<std::size_t> order(v.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> ranks(v.size());
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
        const double r = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
        i = j + 1;
    }
    return ranks;
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
    const double n = static_cast<double>(a.size());
    const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
    const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
    double sab = 0, saa = 0, sbb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    if (saa == 0.0 || sbb == 0.0) return 0.0;
    return sab / std::sqrt(saa * sbb);
}

} // namespace

RankCorrelation spearman(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw StatError("size_mismatch", "spearman needs equal-length inputs");
    if (x.size() < 3) throw StatError("insufficient_n", "spearman needs at least 3 pairs");
    RankCorrelation out;
    out.n = x.size();
    out.rho = pearson(average_ranks(x), average_ranks(y));
    const double df = static_cast<double>(out.n) - 2.0;
    if (std::abs(out.rho) >= 1.0) {
        out.p_value = 0.0;
    } else {
        const double t = out.rho * std::sqrt(df / (1.0 - out.rho * out.rho));
        out.p_value = two_sided_p(t, df);
    }
    return out;
}

Trend linear_trend(std::span<const double> y) {
    if (y.size() >= 3 && std::all_of(y.begin(), y.end(), [&](double v) { return v == y[0]; })) return {};
    Matrix X(y.size(), 2);
    for (std::size_t i = 0; i < y.size(); ++i) {
        X(i, 0) = 1.0;
        X(i, 1) = static_cast<double>(i);
    }
    const auto r = ols_fit(y, X, {"intercept", "day"});
    return {r.coefficients[1], r.std_errors[1], r.p_values[1]};
}

} // namespace adscreen::statlab
