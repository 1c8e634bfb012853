#include "adscreen/adsim/simulator.hpp"

#include "adscreen/common/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace adscreen::adsim {

std::int64_t CampaignConfig::click_capacity() const {
    // The epsilon guards against 15 / 0.05 landing just below an integer.
    return static_cast<std::int64_t>(std::floor(daily_budget / cost_per_click + 1e-9));
}

void validate(const CampaignConfig& c) {
    auto require = [](bool ok, const char* field, const char* why) {
        if (!ok) throw ValidationError(fmt::format("campaign.{}: {}", field, why), field);
    };
    auto unit = [](double v) { return v >= 0.0 && v <= 1.0; };
    require(c.daily_budget > 0.0, "daily_budget", "must be positive");
    require(c.cost_per_click > 0.0, "cost_per_click", "must be positive");
    require(c.days >= 1, "days", "must be at least 1");
    require(c.initial_ctr_estimate > 0.0 && c.initial_ctr_estimate <= 1.0, "initial_ctr_estimate", "must be in (0, 1]");
    require(unit(c.query_rate), "query_rate", "must be in [0, 1]");
    require(unit(c.start_prob), "start_prob", "must be in [0, 1]");
    require(unit(c.decline_share), "decline_share", "must be in [0, 1]");
    require(unit(c.post_consent_prob), "post_consent_prob", "must be in [0, 1]");
    require(unit(c.answers.p_rule), "answers.p_rule", "must be in [0, 1]");
    require(unit(c.answers.p_background), "answers.p_background", "must be in [0, 1]");
}

VisitOutcome InProcessBackend::visit(const Visit& v) {
    VisitOutcome out;
    if (!v.starts) return out;
    out.started = true;
    if (!v.completes) return out;
    out.completed = true;
    const auto& q = questionnaires_.at(v.cancer);
    out.scs = rules::score(q, rules::Response{q.version, v.answers, v.age, v.sex}).scs;
    out.converted = *out.scs == Scs::high && v.consents_post;
    return out;
}

CampaignState::CampaignState(const Population& pop, const CampaignConfig& cfg)
    : ctr_estimate(cfg.initial_ctr_estimate), user_impressions(pop.users.size(), 0),
      user_clicks(pop.users.size(), 0), country_impressions(pop.countries.size(), 0),
      country_clicks(pop.countries.size(), 0) {
    for (auto c : all_cancer_types) by_cancer[c];
}

std::vector<std::size_t> draw_pool(const Population& pop, const CampaignState& state, const CampaignConfig& cfg,
                                   Rng& rng) {
    std::vector<std::size_t> pool;
    for (std::size_t i = 0; i < pop.users.size(); ++i) {
        if (!bernoulli(rng, cfg.query_rate)) continue;
        if (cfg.exclude_past_clickers && state.user_clicks[i] > 0) continue;
        pool.push_back(i);
    }
    return pool;
}

namespace {

// Top (planned - explore) users by priority plus `explore` users drawn
// uniformly from the rest, in random serving order.
std::vector<std::size_t> choose_impressions(const std::vector<std::size_t>& pool, const DayContext& ctx,
                                            const Policy& policy, std::size_t planned, Rng& rng) {
    planned = std::min(planned, pool.size());
    const auto explore = static_cast<std::size_t>(std::llround(ctx.epsilon * static_cast<double>(planned)));
    const std::size_t exploit = planned - explore;

    struct Ranked {
        double priority;
        double tiebreak;
        std::size_t user;
    };
    std::vector<Ranked> ranked;
    ranked.reserve(pool.size());
    for (auto u : pool) ranked.push_back({policy.priority(ctx.pop.users[u], rng), uniform01(rng), u});
    auto better = [](const Ranked& a, const Ranked& b) {
        if (a.priority != b.priority) return a.priority > b.priority;
        return a.tiebreak > b.tiebreak;
    };
    std::nth_element(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(exploit), ranked.end(), better);
    // nth_element leaves the rest in unspecified order; restore pool order so
    // the exploration draw depends only on the rng.
    std::sort(ranked.begin() + static_cast<std::ptrdiff_t>(exploit), ranked.end(),
              [](const Ranked& a, const Ranked& b) { return a.user < b.user; });

    std::vector<std::size_t> shown;
    shown.reserve(planned);
    for (std::size_t i = 0; i < exploit; ++i) shown.push_back(ranked[i].user);
    for (std::size_t i = exploit; i < exploit + explore; ++i) {
        const auto j = std::uniform_int_distribution<std::size_t>(i, ranked.size() - 1)(rng);
        std::swap(ranked[i], ranked[j]);
        shown.push_back(ranked[i].user);
    }
    std::sort(shown.begin(), shown.end());
    std::shuffle(shown.begin(), shown.end(), rng);
    return shown;
}

Visit plan_visit(const SimUser& u, std::size_t index, const Creative& creative, const TriggerKeyword& keyword,
                 Timestamp when, const DayContext& ctx, Rng& rng) {
    const auto& cfg = ctx.config;
    Visit v;
    v.user = index;
    v.user_id = u.user_id;
    v.cancer = u.cancer;
    v.campaign_id = ctx.campaign.campaign_id;
    v.creative_id = creative.id;
    v.query_term = keyword.text;
    v.click_time = when;
    v.age = u.age;
    v.sex = u.sex;
    v.starts = bernoulli(rng, cfg.start_prob);
    v.declines_pre = !v.starts && bernoulli(rng, cfg.decline_share);
    v.completes = v.starts && bernoulli(rng, u.completion_prob);
    v.consents_post = bernoulli(rng, cfg.post_consent_prob);
    const auto& q = ctx.questionnaires.at(u.cancer);
    v.answers = synthesize_answers(q, u.latent_high, u.age, u.sex, cfg.answers, rng);
    if (v.starts && !v.completes)
        v.partial_answers = std::uniform_int_distribution<std::size_t>(1, std::max<std::size_t>(1, q.questions.size() - 1))(rng);
    return v;
}

} // namespace

FunnelStats run_day(CampaignState& state, const DayContext& ctx, const std::vector<std::size_t>& pool, Policy& policy,
                    FunnelBackend& backend, std::uint64_t seed) {
    const auto& cfg = ctx.config;
    Rng rng(seed);
    policy.begin_day(rng);

    FunnelStats stats;
    stats.day = state.day;
    const Date date = cfg.start_date + std::chrono::days{state.day};
    stats.date = date;
    auto& per_cancer = state.by_cancer;
    std::map<CancerType, FunnelStats> cancer_day;
    for (auto c : all_cancer_types) cancer_day[c] = FunnelStats{state.day, date};

    const std::int64_t capacity = cfg.click_capacity();
    const auto planned = state.ctr_estimate > 0.0
                             ? static_cast<std::size_t>(std::floor(static_cast<double>(capacity) / state.ctr_estimate))
                             : pool.size();
    const auto shown = choose_impressions(pool, ctx, policy, planned, rng);

    std::vector<Observation> observations;
    std::vector<std::int64_t> seconds;
    for (auto index : shown) {
        if (stats.clicks >= capacity) break;
        const auto& u = ctx.pop.users[index];
        const auto& keyword = ctx.campaign.pick_keyword(u.cancer, rng);
        const auto& creative = ctx.campaign.pick_creative(u.cancer, rng);
        auto& cs = cancer_day[u.cancer];
        ++stats.impressions;
        ++cs.impressions;
        ++state.user_impressions[index];
        ++state.country_impressions[u.country];
        if (!bernoulli(rng, std::clamp(u.base_ctr * creative.ctr_multiplier, 0.0, 1.0))) continue;

        ++stats.clicks;
        ++cs.clicks;
        ++state.user_clicks[index];
        ++state.country_clicks[u.country];
        const Timestamp when = Timestamp{date} + std::chrono::seconds{std::uniform_int_distribution<int>(0, 86399)(rng)};
        const auto outcome = backend.visit(plan_visit(u, index, creative, keyword, when, ctx, rng));
        stats.starts += outcome.started;
        stats.completions += outcome.completed;
        stats.conversions += outcome.converted;
        cs.starts += outcome.started;
        cs.completions += outcome.completed;
        cs.conversions += outcome.converted;
        observations.push_back({index, outcome.converted});
    }
    stats.spend = static_cast<double>(stats.clicks) * cfg.cost_per_click;
    backend.end_day(state.day, date);

    policy.update(observations, ctx.pop);
    state.total_impressions += stats.impressions;
    state.total_clicks += stats.clicks;
    if (state.total_impressions > 0 && state.total_clicks > 0)
        state.ctr_estimate = static_cast<double>(state.total_clicks) / static_cast<double>(state.total_impressions);
    state.history.push_back(stats);
    for (auto c : all_cancer_types) {
        cancer_day[c].spend = static_cast<double>(cancer_day[c].clicks) * cfg.cost_per_click;
        per_cancer[c].push_back(cancer_day[c]);
    }
    state.policy_snapshots.push_back(policy.snapshot());
    ++state.day;
    return stats;
}

RunResult run_campaign(const SimConfig& cfg, const Population& pop, const QuestionnaireSet& questionnaires,
                       FunnelBackend* backend) {
    validate(cfg.campaign);
    validate(cfg.learner);
    InProcessBackend local(questionnaires);
    FunnelBackend& sink = backend ? *backend : local;
    const Campaign campaign = make_default_campaign();
    auto policy = make_policy(cfg.learner, pop);
    CampaignState state(pop, cfg.campaign);
    const DayContext ctx{pop, campaign, questionnaires, cfg.campaign, cfg.learner.epsilon};

    for (std::size_t d = 0; d < cfg.campaign.days; ++d) {
        Rng pool_rng(derive_seed(cfg.seed, d, 0x9001));
        const auto pool = draw_pool(pop, state, cfg.campaign, pool_rng);
        run_day(state, ctx, pool, *policy, sink, derive_seed(cfg.seed, d, 0xDA7));
    }

    RunResult out;
    out.days = state.history;
    out.by_cancer = state.by_cancer;
    out.policy_snapshots = state.policy_snapshots;
    out.user_impressions = state.user_impressions;
    out.user_clicks = state.user_clicks;
    for (std::size_t c = 0; c < pop.countries.size(); ++c) {
        const auto& country = pop.countries[c];
        out.countries.push_back({country.code, state.country_impressions[c], state.country_clicks[c],
                                 country.gdp_per_capita, country.internet_penetration, country.life_expectancy});
    }
    return out;
}

RunResult run_campaign(const SimConfig& cfg) {
    const auto questionnaires = load_questionnaires(cfg.ruleset_dir);
    const auto pop = generate_population(cfg.population, derive_seed(cfg.seed, 0, 0x909));
    return run_campaign(cfg, pop, questionnaires);
}

} // namespace adscreen::adsim
