#pragma once

#include "adscreen/common/time.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

namespace adscreen::adsim {

struct FunnelStats {
    int day = 0;
    std::optional<Date> date; // calendar day when known
    std::int64_t impressions = 0;
    std::int64_t clicks = 0;
    std::int64_t starts = 0;
    std::int64_t completions = 0;
    std::int64_t conversions = 0;
    double spend = 0.0;

    double ctr() const;
    double conversion_rate() const;                // conversions / clicks, 0 without clicks
    double conversion_per_completion() const;      // conversions / completions, 0 without completions
    bool ordered() const;                          // impressions >= clicks >= ... >= conversions >= 0

    bool operator==(const FunnelStats&) const = default;
};

// day,date,impressions,clicks,ctr,starts,completions,conversions,conversion_rate,conversion_per_completion,spend
void write_funnel_csv(std::ostream& out, const std::vector<FunnelStats>& days);

struct WindowSummary {
    double mean = 0.0;
    double sd = 0.0; // sample standard deviation; 0 for a single day
    std::size_t days = 0;
};

enum class FunnelMetric { conversion_rate, conversion_per_completion, impressions, clicks, ctr };

// Summary over days [first, first + length). Throws ValidationError when the
// window does not fit the series.
WindowSummary summarize(const std::vector<FunnelStats>& days, std::size_t first, std::size_t length,
                        FunnelMetric metric = FunnelMetric::conversion_rate);
WindowSummary summarize_last(const std::vector<FunnelStats>& days, std::size_t length,
                             FunnelMetric metric = FunnelMetric::conversion_rate);

double metric_value(const FunnelStats& s, FunnelMetric metric);

} // namespace adscreen::adsim
