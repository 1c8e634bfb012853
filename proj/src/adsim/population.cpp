#include "adscreen/adsim/population.hpp"

#include "adscreen/common/error.hpp"
#include "adscreen/common/rng.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace adscreen::adsim {
namespace {

void require(bool ok, const char* field, const std::string& why) {
    if (!ok) throw ValidationError(fmt::format("population.{}: {}", field, why), field);
}

bool unit(double v) { return v >= 0.0 && v <= 1.0; }

} // namespace

void validate(const PopulationConfig& cfg) {
    require(cfg.n_users > 0, "n_users", "must be positive");
    require(cfg.prevalence > 0.0 && cfg.prevalence < 1.0, "prevalence", "must be in (0, 1)");
    require(unit(cfg.signal_strength), "signal_strength", "must be in [0, 1]");
    require(cfg.n_features > 0, "n_features", "must be positive");
    require(cfg.n_informative <= cfg.n_features, "n_informative", "cannot exceed n_features");
    require(cfg.feature_shift >= 0.0, "feature_shift", "must be non-negative");
    require(unit(cfg.base_ctr_mean), "base_ctr_mean", "must be in [0, 1]");
    require(cfg.base_ctr_sd >= 0.0, "base_ctr_sd", "must be non-negative");
    require(unit(cfg.completion_prob_mean), "completion_prob_mean", "must be in [0, 1]");
    require(cfg.completion_lift > 0.0, "completion_lift", "must be positive");
    require(completion_probs(cfg).second <= 1.0, "completion_lift", "pushes latent-high completion above 1");
    require(!cfg.countries.empty() || cfg.n_countries > 0, "n_countries", "must be positive");
    for (const auto& c : cfg.countries) {
        require(c.weight > 0.0, "countries", fmt::format("country {} needs a positive weight", c.code));
        require(c.gdp_per_capita > 0.0, "countries", fmt::format("country {} needs a positive GDP", c.code));
        require(unit(c.internet_penetration), "countries",
                fmt::format("country {} internet penetration must be a fraction", c.code));
    }
}

std::pair<double, double> completion_probs(const PopulationConfig& cfg) {
    const double low = cfg.completion_prob_mean / (cfg.prevalence * cfg.completion_lift + 1.0 - cfg.prevalence);
    return {low, low * cfg.completion_lift};
}

double signal_score(const SimUser& u, const PopulationConfig& cfg) {
    return std::accumulate(u.features.begin(), u.features.begin() + static_cast<std::ptrdiff_t>(cfg.n_informative), 0.0);
}

std::vector<Country> generate_country_mix(std::size_t n, std::uint64_t seed) {
    statlab::CountryGenerator g;
    g.n_countries = n;
    g.min_impressions = 1;
    g.max_impressions = 10000;
    g.seed = seed;
    std::vector<Country> out;
    for (const auto& c : statlab::generate_countries(g))
        out.push_back({c.code, static_cast<double>(c.impressions), c.gdp_per_capita, c.internet_penetration,
                       c.life_expectancy});
    return out;
}

Population generate_population(const PopulationConfig& cfg, std::uint64_t seed) {
    validate(cfg);
    Population pop;
    pop.config = cfg;
    pop.countries = cfg.countries.empty() ? generate_country_mix(cfg.n_countries, derive_seed(seed, 0, 0xC0)) : cfg.countries;

    std::vector<double> weights;
    double w_total = 0.0, mean_pct = 0.0, mean_life = 0.0;
    for (const auto& c : pop.countries) {
        weights.push_back(c.weight);
        w_total += c.weight;
        mean_pct += c.weight * 100.0 * c.internet_penetration;
        mean_life += c.weight * c.life_expectancy;
    }
    mean_pct /= w_total;
    mean_life /= w_total;

    const auto [c_low, c_high] = completion_probs(cfg);
    Rng rng(derive_seed(seed, 1, 0x909));
    std::normal_distribution<double> normal(0.0, 1.0);
    std::discrete_distribution<std::size_t> pick_country(weights.begin(), weights.end());
    std::uniform_int_distribution<int> pick_cancer(0, 2);

    pop.users.reserve(cfg.n_users);
    for (std::size_t i = 0; i < cfg.n_users; ++i) {
        SimUser u;
        u.user_id = fmt::format("u{:07}", i);
        u.latent_high = bernoulli(rng, cfg.prevalence);
        u.features.resize(cfg.n_features);
        const double shift = u.latent_high ? cfg.signal_strength * cfg.feature_shift : 0.0;
        for (std::size_t j = 0; j < cfg.n_features; ++j)
            u.features[j] = normal(rng) + (j < cfg.n_informative ? shift : 0.0);
        u.country = pick_country(rng);
        u.cancer = all_cancer_types[static_cast<std::size_t>(pick_cancer(rng))];
        // Symptomatic users skew older.
        u.age = u.latent_high ? std::uniform_int_distribution<int>(40, 85)(rng)
                              : std::uniform_int_distribution<int>(18, 80)(rng);
        const double p_female = u.cancer == CancerType::breast ? 0.9 : 0.5;
        u.sex = bernoulli(rng, p_female) ? Sex::female : Sex::male;

        const auto& c = pop.countries[u.country];
        const double country_ctr = cfg.base_ctr_mean + cfg.ctr_internet_slope * (100.0 * c.internet_penetration - mean_pct) +
                                   cfg.ctr_life_slope * (c.life_expectancy - mean_life);
        u.base_ctr = std::clamp(country_ctr + cfg.base_ctr_sd * normal(rng), 0.0, 1.0);
        u.completion_prob = u.latent_high ? c_high : c_low;
        pop.users.push_back(std::move(u));
    }
    return pop;
}

} // namespace adscreen::adsim
