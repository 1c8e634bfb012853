#include "adscreen/adsim/funnel.hpp"

#include "adscreen/common/error.hpp"
#include "adscreen/common/io.hpp"

#include <fmt/format.h>

#include <cmath>
#include <ostream>

namespace adscreen::adsim {

namespace {

double ratio(std::int64_t num, std::int64_t den) {
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

} // namespace

double FunnelStats::ctr() const { return ratio(clicks, impressions); }
double FunnelStats::conversion_rate() const { return ratio(conversions, clicks); }
double FunnelStats::conversion_per_completion() const { return ratio(conversions, completions); }

bool FunnelStats::ordered() const {
    return impressions >= clicks && clicks >= starts && starts >= completions && completions >= conversions &&
           conversions >= 0;
}

void write_funnel_csv(std::ostream& out, const std::vector<FunnelStats>& days) {
    out << "day,date,impressions,clicks,ctr,starts,completions,conversions,conversion_rate,"
           "conversion_per_completion,spend\n";
    for (const auto& d : days)
        out << d.day << ',' << (d.date ? format_date(*d.date) : "") << ',' << d.impressions << ',' << d.clicks << ','
            << format_double(d.ctr()) << ',' << d.starts << ',' << d.completions << ',' << d.conversions << ','
            << format_double(d.conversion_rate()) << ',' << format_double(d.conversion_per_completion()) << ','
            << format_double(d.spend) << '\n';
}

double metric_value(const FunnelStats& s, FunnelMetric metric) {
    switch (metric) {
    case FunnelMetric::conversion_rate: return s.conversion_rate();
    case FunnelMetric::conversion_per_completion: return s.conversion_per_completion();
    case FunnelMetric::impressions: return static_cast<double>(s.impressions);
    case FunnelMetric::clicks: return static_cast<double>(s.clicks);
    case FunnelMetric::ctr: return s.ctr();
    }
    return 0.0;
}

WindowSummary summarize(const std::vector<FunnelStats>& days, std::size_t first, std::size_t length,
                        FunnelMetric metric) {
    if (length == 0) throw ValidationError("summary window must cover at least one day", "window");
    if (first > days.size() || length > days.size() - first)
        throw ValidationError(
            fmt::format("window of {} days from day {} exceeds the {}-day series", length, first, days.size()), "window");
    WindowSummary w;
    w.days = length;
    for (std::size_t i = first; i < first + length; ++i) w.mean += metric_value(days[i], metric);
    w.mean /= static_cast<double>(length);
    if (length > 1) {
        double ss = 0.0;
        for (std::size_t i = first; i < first + length; ++i) ss += std::pow(metric_value(days[i], metric) - w.mean, 2);
        w.sd = std::sqrt(ss / static_cast<double>(length - 1));
    }
    return w;
}

WindowSummary summarize_last(const std::vector<FunnelStats>& days, std::size_t length, FunnelMetric metric) {
    if (length > days.size())
        throw ValidationError(fmt::format("window of {} days exceeds the {}-day series", length, days.size()), "window");
    return summarize(days, days.size() - length, length, metric);
}

} // namespace adscreen::adsim
