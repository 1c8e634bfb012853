#pragma once

#include "adscreen/adsim/funnel.hpp"

#include <string>
#include <vector>

namespace adscreen::cli {

// Line chart of the daily conversion rate (per click, and per completion as
// a second series), y axis in percent.
std::string conversion_rate_svg(const std::vector<adsim::FunnelStats>& days, const std::string& title);

} // namespace adscreen::cli
