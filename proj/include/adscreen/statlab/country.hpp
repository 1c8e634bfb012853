#pragma once

#include "adscreen/statlab/statlab.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace adscreen::statlab {

struct CountryStats {
    std::string code;
    std::int64_t impressions = 0;
    std::int64_t clicks = 0;
    double gdp_per_capita = 0.0;
    double internet_penetration = 0.0; // fraction in [0, 1]
    double life_expectancy = 0.0;      // years

    double ctr() const { return static_cast<double>(clicks) / static_cast<double>(impressions); }
};

inline constexpr std::int64_t default_min_impressions = 150;

// Keeps rows with impressions >= min_impressions, order preserved.
std::vector<CountryStats> filter_countries(std::vector<CountryStats> rows,
                                           std::int64_t min_impressions = default_min_impressions);

inline constexpr std::size_t min_countries = 10;

// ctr ~ 1 + ln(gdp) + internet (percentage points) + life expectancy.
// Throws StatError "insufficient_n" below 10 countries and "invalid_row"
// naming the country for non-positive GDP or impressions.
RegressionReport country_ctr_model(const std::vector<CountryStats>& stats);

// CSV: country,impressions,clicks,gdp_per_capita,internet_penetration_pct,life_expectancy_yrs
std::vector<CountryStats> read_country_csv(std::istream& in, const std::string& source = "<stream>");
std::vector<CountryStats> load_country_csv(const std::filesystem::path& path);
void write_country_csv(std::ostream& out, const std::vector<CountryStats>& rows);

// Synthetic country table whose CTR follows the model above with known
// slopes. Covariates share a latent development level, as real ones do.
struct CountryGenerator {
    std::size_t n_countries = 50;
    double intercept = 0.2;
    double slope_log_gdp = 0.0;
    double slope_internet = 0.001; // per percentage point
    double slope_life = -0.002;    // per year
    double ctr_noise_sd = 0.01;
    std::int64_t min_impressions = 60;
    std::int64_t max_impressions = 5000;
    std::uint64_t seed = 0;
};

std::vector<CountryStats> generate_countries(const CountryGenerator& g);

// True CTR under the generator's model, before binomial click sampling.
double generator_ctr(const CountryGenerator& g, const CountryStats& c);

} // namespace adscreen::statlab
