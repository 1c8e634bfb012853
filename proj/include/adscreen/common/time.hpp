#pragma once

#include <chrono>
#include <string>
#include <string_view>

namespace adscreen {

using Timestamp = std::chrono::sys_seconds;
using Date = std::chrono::sys_days;

// Accepts `YYYY-MM-DDTHH:MM:SS[.frac](Z|±HH:MM)`; fractional seconds are
// truncated. Throws ParseError.
Timestamp parse_rfc3339(std::string_view text);

// Always UTC with a `Z` suffix, second resolution.
std::string format_rfc3339(Timestamp ts);

// `YYYY-MM-DD`. Throws ParseError.
Date parse_date(std::string_view text);
std::string format_date(Date d);

inline Date day_of(Timestamp ts) { return std::chrono::floor<std::chrono::days>(ts); }

} // namespace adscreen
