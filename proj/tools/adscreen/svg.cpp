#include "svg.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace adscreen::cli {

namespace {

constexpr double width = 720, height = 400;
constexpr double left = 64, right = 24, top = 40, bottom = 52;

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

} // namespace

std::string conversion_rate_svg(const std::vector<adsim::FunnelStats>& days, const std::string& title) {
    double y_max = 0.0;
    for (const auto& d : days) y_max = std::max({y_max, d.conversion_rate(), d.conversion_per_completion()});
    // Round the axis up to a whole 5 percent.
    const double top_pct = std::max(5.0, std::ceil(y_max * 100.0 / 5.0) * 5.0);
    const double plot_w = width - left - right, plot_h = height - top - bottom;
    const std::size_t n = days.size();
    auto x_of = [&](std::size_t i) { return left + (n > 1 ? plot_w * static_cast<double>(i) / (n - 1) : plot_w / 2); };
    auto y_of = [&](double rate) { return top + plot_h * (1.0 - rate * 100.0 / top_pct); };

    std::string out = fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\">\n"
        "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        "<text x=\"{2}\" y=\"24\" font-family=\"sans-serif\" font-size=\"15\">{3}</text>\n",
        width, height, left, escape(title));

    for (int k = 0; k <= 5; ++k) {
        const double pct = top_pct * k / 5.0;
        const double y = y_of(pct / 100.0);
        out += fmt::format("<line x1=\"{}\" y1=\"{:.1f}\" x2=\"{}\" y2=\"{:.1f}\" stroke=\"#ddd\"/>\n", left, y,
                           width - right, y);
        out += fmt::format(
            "<text x=\"{}\" y=\"{:.1f}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">{:g}%</text>\n",
            left - 6, y + 4, pct);
    }
    const std::size_t step = std::max<std::size_t>(1, (n + 9) / 10);
    for (std::size_t i = 0; i < n; i += step)
        out += fmt::format(
            "<text x=\"{:.1f}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">{}</text>\n",
            x_of(i), height - bottom + 16, days[i].day + 1);
    out += fmt::format("<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\" "
                       "text-anchor=\"middle\">campaign day</text>\n",
                       left + plot_w / 2, height - 12);
    out += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"black\"/>\n", left, top,
                       top + plot_h);
    out += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"black\"/>\n", left, top + plot_h,
                       width - right);

    auto series = [&](auto value, const char* colour, const char* label, int legend_row) {
        std::string pts;
        for (std::size_t i = 0; i < n; ++i)
            pts += fmt::format("{}{:.1f},{:.1f}", i ? " " : "", x_of(i), y_of(value(days[i])));
        out += fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"2\" points=\"{}\"/>\n", colour, pts);
        const double ly = top + 8 + 16 * legend_row;
        out += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"{3}\" stroke-width=\"2\"/>\n",
                           left + 12, ly, left + 32, colour);
        out += fmt::format("<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\">{}</text>\n",
                           left + 38, ly + 4, label);
    };
    series([](const adsim::FunnelStats& d) { return d.conversion_rate(); }, "#1f77b4", "conversions per click", 0);
    series([](const adsim::FunnelStats& d) { return d.conversion_per_completion(); }, "#ff7f0e",
           "conversions per completion", 1);
    out += "</svg>\n";
    return out;
}

} // namespace adscreen::cli
