#pragma once

#include "adscreen/adsim/campaign.hpp"
#include "adscreen/adsim/funnel.hpp"
#include "adscreen/adsim/policy.hpp"
#include "adscreen/adsim/population.hpp"
#include "adscreen/statlab/country.hpp"

#include <json.hpp>

#include <filesystem>
#include <map>
#include <optional>
#include <vector>

namespace adscreen::adsim {

struct CampaignConfig {
    double daily_budget = 15.0;
    double cost_per_click = 0.50;
    std::size_t days = 28;
    Date start_date = parse_date("2018-05-16");
    double initial_ctr_estimate = 0.10;
    double query_rate = 0.25; // chance a user issues a trigger query on a given day
    double start_prob = 0.45;
    double decline_share = 0.5; // of clickers who do not start, the share that decline consent explicitly
    double post_consent_prob = 0.9;
    bool exclude_past_clickers = false;
    AnswerModel answers;

    std::int64_t click_capacity() const; // floor(budget / cost per click)
};

void validate(const CampaignConfig& cfg);

struct SimConfig {
    PopulationConfig population;
    CampaignConfig campaign;
    LearnerSpec learner;
    std::uint64_t seed = 0;
    std::filesystem::path ruleset_dir = "rulesets";
};

// What one clicking user does after landing. The simulator draws all of it up
// front so every backend sees the same behaviour.
struct Visit {
    std::size_t user = 0;
    std::string user_id;
    CancerType cancer = CancerType::breast;
    std::string campaign_id;
    std::string creative_id;
    std::string query_term;
    Timestamp click_time;
    int age = 0;
    Sex sex = Sex::unspecified;
    bool declines_pre = false; // only meaningful when !starts
    bool starts = false;
    bool completes = false;
    std::size_t partial_answers = 0; // questions answered (in questionnaire order) when !completes
    bool consents_post = false;
    std::map<std::string, rules::AnswerValue> answers; // every question
};

struct VisitOutcome {
    bool started = false;
    bool completed = false;
    std::optional<Scs> scs;
    bool converted = false;
};

// Where clicks land: in-process scoring, or the real screening service.
class FunnelBackend {
public:
    virtual ~FunnelBackend() = default;
    virtual VisitOutcome visit(const Visit& v) = 0;
    virtual void end_day(int day, Date date) {
        (void)day;
        (void)date;
    }
};

class InProcessBackend final : public FunnelBackend {
public:
    explicit InProcessBackend(const QuestionnaireSet& questionnaires) : questionnaires_(questionnaires) {}
    VisitOutcome visit(const Visit& v) override;

private:
    const QuestionnaireSet& questionnaires_;
};

struct CampaignState {
    int day = 0;
    double ctr_estimate = 0.10;
    std::int64_t total_impressions = 0;
    std::int64_t total_clicks = 0;
    std::vector<FunnelStats> history;
    std::map<CancerType, std::vector<FunnelStats>> by_cancer;
    std::vector<nlohmann::json> policy_snapshots; // after each day's update
    std::vector<std::int32_t> user_impressions;
    std::vector<std::int32_t> user_clicks;
    std::vector<std::int64_t> country_impressions;
    std::vector<std::int64_t> country_clicks;

    CampaignState(const Population& pop, const CampaignConfig& cfg);
};

struct DayContext {
    const Population& pop;
    const Campaign& campaign;
    const QuestionnaireSet& questionnaires;
    const CampaignConfig& config;
    double epsilon = 0.0;
};

// Users issuing a trigger query today.
std::vector<std::size_t> draw_pool(const Population& pop, const CampaignState& state, const CampaignConfig& cfg,
                                   Rng& rng);

// One day: pick impressions, simulate clicks and visits, update the policy on
// today's clickers. Appends to state.history and returns the day's stats.
FunnelStats run_day(CampaignState& state, const DayContext& ctx, const std::vector<std::size_t>& pool, Policy& policy,
                    FunnelBackend& backend, std::uint64_t seed);

struct RunResult {
    std::vector<FunnelStats> days;
    std::map<CancerType, std::vector<FunnelStats>> by_cancer;
    std::vector<nlohmann::json> policy_snapshots;
    std::vector<statlab::CountryStats> countries;
    std::vector<std::int32_t> user_impressions;
    std::vector<std::int32_t> user_clicks;
};

// Runs cfg.campaign.days days. `backend` defaults to in-process scoring.
RunResult run_campaign(const SimConfig& cfg, const Population& pop, const QuestionnaireSet& questionnaires,
                       FunnelBackend* backend = nullptr);

// Generates the population and loads the questionnaires from cfg.ruleset_dir.
RunResult run_campaign(const SimConfig& cfg);

// JSON configuration. Unknown keys are rejected; relative ruleset_dir is
// resolved against `base_dir`.
SimConfig sim_config_from_json(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});
SimConfig load_sim_config(const std::filesystem::path& path);
nlohmann::json sim_config_to_json(const SimConfig& cfg);

} // namespace adscreen::adsim
