#include "adscreen/adsim/simulator.hpp"

#include "adscreen/common/error.hpp"
#include "adscreen/common/io.hpp"

#include <fmt/format.h>

#include <set>

namespace adscreen::adsim {

using nlohmann::json;

namespace {

// Reads optional fields of one JSON object and rejects keys nobody asked for.
class Section {
public:
    Section(const json& doc, std::string path) : doc_(doc), path_(std::move(path)) {
        if (!doc_.is_object()) throw ValidationError(fmt::format("{} must be an object", label()), path_);
    }
    ~Section() noexcept(false) {
        if (std::uncaught_exceptions() > 0) return;
        for (const auto& [key, _] : doc_.items())
            if (!seen_.count(key))
                throw ValidationError(fmt::format("unknown key '{}' in {}", key, label()), qualify(key));
    }

    template <typename T>
    void get(const char* key, T& out) {
        seen_.insert(key);
        if (!doc_.contains(key)) return;
        try {
            out = doc_.at(key).get<T>();
        } catch (const json::exception&) {
            throw ValidationError(fmt::format("{} has the wrong type", qualify(key)), qualify(key));
        }
    }

    const json* child(const char* key) {
        seen_.insert(key);
        return doc_.contains(key) ? &doc_.at(key) : nullptr;
    }

    std::string qualify(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

private:
    std::string label() const { return path_.empty() ? "config" : path_; }

    const json& doc_;
    std::string path_;
    std::set<std::string> seen_;
};

PopulationConfig population_from(const json& doc) {
    PopulationConfig p;
    Section s(doc, "population");
    s.get("n_users", p.n_users);
    s.get("prevalence", p.prevalence);
    s.get("signal_strength", p.signal_strength);
    s.get("n_features", p.n_features);
    s.get("n_informative", p.n_informative);
    s.get("feature_shift", p.feature_shift);
    s.get("base_ctr_mean", p.base_ctr_mean);
    s.get("base_ctr_sd", p.base_ctr_sd);
    s.get("ctr_internet_slope", p.ctr_internet_slope);
    s.get("ctr_life_slope", p.ctr_life_slope);
    s.get("completion_prob_mean", p.completion_prob_mean);
    s.get("completion_lift", p.completion_lift);
    s.get("n_countries", p.n_countries);
    if (const json* countries = s.child("countries")) {
        if (!countries->is_array()) throw ValidationError("population.countries must be an array", "population.countries");
        for (const auto& c : *countries) {
            Section cs(c, "population.countries[]");
            Country country;
            double pct = 0.0;
            cs.get("code", country.code);
            cs.get("weight", country.weight);
            cs.get("gdp_per_capita", country.gdp_per_capita);
            cs.get("internet_penetration_pct", pct);
            cs.get("life_expectancy", country.life_expectancy);
            country.internet_penetration = pct / 100.0;
            p.countries.push_back(std::move(country));
        }
    }
    validate(p);
    return p;
}

CampaignConfig campaign_from(const json& doc) {
    CampaignConfig c;
    Section s(doc, "campaign");
    s.get("daily_budget", c.daily_budget);
    s.get("cost_per_click", c.cost_per_click);
    long long days = static_cast<long long>(c.days);
    s.get("days", days);
    if (days < 1) throw ValidationError("campaign.days must be at least 1", "campaign.days");
    c.days = static_cast<std::size_t>(days);
    std::string start;
    s.get("start_date", start);
    if (!start.empty()) c.start_date = parse_date(start);
    s.get("initial_ctr_estimate", c.initial_ctr_estimate);
    s.get("query_rate", c.query_rate);
    s.get("start_prob", c.start_prob);
    s.get("decline_share", c.decline_share);
    s.get("post_consent_prob", c.post_consent_prob);
    s.get("exclude_past_clickers", c.exclude_past_clickers);
    s.get("answer_p_rule", c.answers.p_rule);
    s.get("answer_p_background", c.answers.p_background);
    validate(c);
    return c;
}

LearnerSpec learner_from(const json& doc) {
    LearnerSpec l;
    Section s(doc, "learner");
    std::string kind(to_string(l.kind));
    s.get("kind", kind);
    const auto parsed = parse_learner_kind(kind);
    if (!parsed) throw ValidationError(fmt::format("unknown learner kind '{}'", kind), "learner.kind");
    l.kind = *parsed;
    s.get("epsilon", l.epsilon);
    s.get("learning_rate", l.learning_rate);
    s.get("epochs", l.epochs);
    s.get("l2", l.l2);
    s.get("segments", l.segments);
    s.get("prior_alpha", l.prior_alpha);
    s.get("prior_beta", l.prior_beta);
    validate(l);
    return l;
}

} // namespace

SimConfig sim_config_from_json(const json& doc, const std::filesystem::path& base_dir) {
    SimConfig cfg;
    Section s(doc, "");
    s.get("seed", cfg.seed);
    std::string rulesets;
    s.get("ruleset_dir", rulesets);
    if (!rulesets.empty()) cfg.ruleset_dir = rulesets;
    if (cfg.ruleset_dir.is_relative() && !base_dir.empty()) cfg.ruleset_dir = base_dir / cfg.ruleset_dir;
    if (const json* p = s.child("population")) cfg.population = population_from(*p);
    if (const json* c = s.child("campaign")) cfg.campaign = campaign_from(*c);
    if (const json* l = s.child("learner")) cfg.learner = learner_from(*l);
    return cfg;
}

SimConfig load_sim_config(const std::filesystem::path& path) {
    const auto text = read_file(path);
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(fmt::format("malformed config: {}", e.what()), path.string());
    }
    return sim_config_from_json(doc, path.parent_path());
}

json sim_config_to_json(const SimConfig& cfg) {
    const auto& p = cfg.population;
    json countries = json::array();
    for (const auto& c : p.countries)
        countries.push_back({{"code", c.code},
                             {"weight", c.weight},
                             {"gdp_per_capita", c.gdp_per_capita},
                             {"internet_penetration_pct", 100.0 * c.internet_penetration},
                             {"life_expectancy", c.life_expectancy}});
    json population{{"n_users", p.n_users},
                    {"prevalence", p.prevalence},
                    {"signal_strength", p.signal_strength},
                    {"n_features", p.n_features},
                    {"n_informative", p.n_informative},
                    {"feature_shift", p.feature_shift},
                    {"base_ctr_mean", p.base_ctr_mean},
                    {"base_ctr_sd", p.base_ctr_sd},
                    {"ctr_internet_slope", p.ctr_internet_slope},
                    {"ctr_life_slope", p.ctr_life_slope},
                    {"completion_prob_mean", p.completion_prob_mean},
                    {"completion_lift", p.completion_lift},
                    {"n_countries", p.n_countries}};
    if (!countries.empty()) population["countries"] = countries;
    const auto& c = cfg.campaign;
    json campaign{{"daily_budget", c.daily_budget},
                  {"cost_per_click", c.cost_per_click},
                  {"days", c.days},
                  {"start_date", format_date(c.start_date)},
                  {"initial_ctr_estimate", c.initial_ctr_estimate},
                  {"query_rate", c.query_rate},
                  {"start_prob", c.start_prob},
                  {"decline_share", c.decline_share},
                  {"post_consent_prob", c.post_consent_prob},
                  {"exclude_past_clickers", c.exclude_past_clickers},
                  {"answer_p_rule", c.answers.p_rule},
                  {"answer_p_background", c.answers.p_background}};
    const auto& l = cfg.learner;
    json learner{{"kind", to_string(l.kind)}, {"epsilon", l.epsilon},       {"learning_rate", l.learning_rate},
                 {"epochs", l.epochs},        {"l2", l.l2},                 {"segments", l.segments},
                 {"prior_alpha", l.prior_alpha}, {"prior_beta", l.prior_beta}};
    return {{"seed", cfg.seed},
            {"ruleset_dir", cfg.ruleset_dir.generic_string()},
            {"population", population},
            {"campaign", campaign},
            {"learner", learner}};
}

} // namespace adscreen::adsim
