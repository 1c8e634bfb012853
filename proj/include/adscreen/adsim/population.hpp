#pragma once

#include "adscreen/common/types.hpp"
#include "adscreen/statlab/country.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace adscreen::adsim {

struct Country {
    std::string code;
    double weight = 1.0; // share of the population, unnormalized
    double gdp_per_capita = 0.0;
    double internet_penetration = 0.0; // fraction
    double life_expectancy = 0.0;
};

struct PopulationConfig {
    std::size_t n_users = 10000;
    double prevalence = 0.1;
    double signal_strength = 0.8; // 0: features carry no information
    std::size_t n_features = 8;
    std::size_t n_informative = 4;
    double feature_shift = 1.25; // mean shift of informative features at full signal

    double base_ctr_mean = 0.10;
    double base_ctr_sd = 0.02;      // per-user spread around the country level
    double ctr_internet_slope = 0.001; // per percentage point, around the mean country
    double ctr_life_slope = -0.002;    // per year
    double completion_prob_mean = 0.36;
    double completion_lift = 1.0; // completion probability ratio, latent-high over latent-low

    std::size_t n_countries = 50;
    std::vector<Country> countries; // generated when empty
};

struct SimUser {
    std::string user_id;
    bool latent_high = false;
    std::vector<double> features;
    std::size_t country = 0;
    int age = 0;
    Sex sex = Sex::unspecified;
    CancerType cancer = CancerType::breast; // the worry that triggers queries
    double base_ctr = 0.0;
    double completion_prob = 0.0;
};

struct Population {
    PopulationConfig config;
    std::vector<Country> countries;
    std::vector<SimUser> users;
};

// Throws ValidationError naming the offending field.
void validate(const PopulationConfig& cfg);

// Synthetic countries with correlated covariates, weights spread over four
// orders of magnitude.
std::vector<Country> generate_country_mix(std::size_t n, std::uint64_t seed);

Population generate_population(const PopulationConfig& cfg, std::uint64_t seed);

// Completion probabilities of latent-low and latent-high users such that the
// population mean is completion_prob_mean.
std::pair<double, double> completion_probs(const PopulationConfig& cfg);

// Sum of the informative features: the score an oracle targeter would use.
double signal_score(const SimUser& u, const PopulationConfig& cfg);

} // namespace adscreen::adsim
