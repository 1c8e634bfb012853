#include "adscreen/statlab/country.hpp"

#include "adscreen/common/io.hpp"
#include "adscreen/common/rng.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

namespace adscreen::statlab {

std::vector<CountryStats> filter_countries(std::vector<CountryStats> rows, std::int64_t min_impressions) {
    std::erase_if(rows, [&](const CountryStats& c) { return c.impressions < min_impressions; });
    return rows;
}

RegressionReport country_ctr_model(const std::vector<CountryStats>& stats) {
    if (stats.size() < min_countries)
        throw StatError("insufficient_n",
                        fmt::format("country model needs at least {} countries, got {}", min_countries, stats.size()));
    Matrix X(stats.size(), 4);
    std::vector<double> y;
    for (std::size_t i = 0; i < stats.size(); ++i) {
        const auto& c = stats[i];
        if (!(c.gdp_per_capita > 0.0))
            throw StatError("invalid_row", fmt::format("country {} has non-positive GDP per capita", c.code), c.code);
        if (c.impressions <= 0)
            throw StatError("invalid_row", fmt::format("country {} has no impressions", c.code), c.code);
        X(i, 0) = 1.0;
        X(i, 1) = std::log(c.gdp_per_capita);
        X(i, 2) = 100.0 * c.internet_penetration;
        X(i, 3) = c.life_expectancy;
        y.push_back(c.ctr());
    }
    return ols_fit(y, X, {"intercept", "log_gdp_per_capita", "internet_penetration_pct", "life_expectancy_yrs"});
}

namespace {

const std::vector<std::string> country_header{"country",        "impressions",
                                              "clicks",         "gdp_per_capita",
                                              "internet_penetration_pct", "life_expectancy_yrs"};

double parse_number(const std::string& text, const std::string& where) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used == text.size() && std::isfinite(v)) return v;
    } catch (const std::exception&) {
    }
    throw ParseError(fmt::format("not a number: '{}'", text), where);
}

} // namespace

std::vector<CountryStats> read_country_csv(std::istream& in, const std::string& source) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError("empty country table", source);
    std::vector<std::string> header;
    for (const auto& h : split_csv_line(trim(line))) header.emplace_back(trim(h));
    if (header != country_header)
        throw ParseError("country table header must be: " + fmt::format("{}", fmt::join(country_header, ",")), source + ":1");

    std::vector<CountryStats> rows;
    for (std::size_t lineno = 2; std::getline(in, line); ++lineno) {
        if (trim(line).empty()) continue;
        const auto where = fmt::format("{}:{}", source, lineno);
        const auto f = split_csv_line(trim(line));
        if (f.size() != country_header.size())
            throw ParseError(fmt::format("expected {} fields, got {}", country_header.size(), f.size()), where);
        CountryStats c;
        c.code = std::string(trim(f[0]));
        const double imp = parse_number(std::string(trim(f[1])), where);
        const double clk = parse_number(std::string(trim(f[2])), where);
        if (imp != std::floor(imp) || clk != std::floor(clk) || imp < 0 || clk < 0)
            throw ParseError("impressions and clicks must be non-negative integers", where);
        c.impressions = static_cast<std::int64_t>(imp);
        c.clicks = static_cast<std::int64_t>(clk);
        if (c.clicks > c.impressions) throw ParseError("clicks exceed impressions", where);
        c.gdp_per_capita = parse_number(std::string(trim(f[3])), where);
        const double pct = parse_number(std::string(trim(f[4])), where);
        if (pct < 0.0 || pct > 100.0) throw ParseError("internet penetration must be within [0, 100] percent", where);
        c.internet_penetration = pct / 100.0;
        c.life_expectancy = parse_number(std::string(trim(f[5])), where);
        rows.push_back(std::move(c));
    }
    return rows;
}

std::vector<CountryStats> load_country_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open country table", path.string());
    return read_country_csv(in, path.string());
}

void write_country_csv(std::ostream& out, const std::vector<CountryStats>& rows) {
    out << fmt::format("{}", fmt::join(country_header, ",")) << '\n';
    for (const auto& c : rows)
        out << c.code << ',' << c.impressions << ',' << c.clicks << ',' << format_double(c.gdp_per_capita) << ','
            << format_double(100.0 * c.internet_penetration) << ',' << format_double(c.life_expectancy) << '\n';
}

double generator_ctr(const CountryGenerator& g, const CountryStats& c) {
    return g.intercept + g.slope_log_gdp * std::log(c.gdp_per_capita) +
           g.slope_internet * 100.0 * c.internet_penetration + g.slope_life * c.life_expectancy;
}

std::vector<CountryStats> generate_countries(const CountryGenerator& g) {
    if (g.min_impressions < 1 || g.max_impressions < g.min_impressions)
        throw ValidationError("generator impression range is empty");
    Rng rng(g.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> log_imp(std::log(static_cast<double>(g.min_impressions)),
                                                   std::log(static_cast<double>(g.max_impressions)));
    std::vector<CountryStats> out;
    for (std::size_t i = 0; i < g.n_countries; ++i) {
        CountryStats c;
        c.code = fmt::format("C{:02}", i + 1);
        const double z = normal(rng); // development level
        c.gdp_per_capita = std::exp(9.0 + 1.2 * z + 0.5 * normal(rng));
        c.internet_penetration = std::clamp(50.0 + 25.0 * z + 12.0 * normal(rng), 1.0, 99.0) / 100.0;
        c.life_expectancy = std::clamp(70.0 + 6.0 * z + 4.0 * normal(rng), 45.0, 85.0);
        c.impressions = std::clamp<std::int64_t>(static_cast<std::int64_t>(std::exp(log_imp(rng))),
                                                 g.min_impressions, g.max_impressions);
        const double p = std::clamp(generator_ctr(g, c) + g.ctr_noise_sd * normal(rng), 0.001, 0.999);
        c.clicks = std::binomial_distribution<std::int64_t>(c.impressions, p)(rng);
        out.push_back(std::move(c));
    }
    return out;
}

} // namespace adscreen::statlab
