// Acceptance run: one line per criterion, exit status 0 iff all pass.

#include "adscreen/adsim/simulator.hpp"
#include "adscreen/common/io.hpp"
#include "adscreen/learner/evaluation.hpp"
#include "adscreen/learner/forest.hpp"
#include "adscreen/rules/questionnaire.hpp"
#include "adscreen/service/sim_backend.hpp"
#include "adscreen/statlab/country.hpp"
#include "adscreen/statlab/statlab.hpp"
#include "adscreen/textfeat/textfeat.hpp"

#include "support/ols_oracle.hpp"
#include "support/paths.hpp"
#include "support/rule_oracle.hpp"
#include "support/service_harness.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <thread>

using namespace adscreen;
namespace t = adscreen::testing;
using nlohmann::json;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Criterion {
    std::string name;
    double time_limit_s; // 0: none
    std::function<Outcome()> run;
};

learner::Dataset separable_corpus() { return learner::load_dataset_csv(t::data_dir() / "separable_corpus.csv"); }

// ------------------------------------------------------------------ ROC

double pairwise_auc(const std::vector<double>& s, const std::vector<int>& y) {
    double wins = 0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = 0; j < s.size(); ++j)
            if (y[i] == 1 && y[j] == 0) {
                ++pairs;
                wins += s[i] > s[j] ? 1.0 : s[i] == s[j] ? 0.5 : 0.0;
            }
    return wins / static_cast<double>(pairs);
}

Outcome roc_oracle() {
    Rng rng(20180516);
    std::size_t mismatches = 0, max_n = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const auto n = std::uniform_int_distribution<std::size_t>(2, 200)(rng);
        max_n = std::max(max_n, n);
        // Alternate coarse (many ties) and continuous scores.
        const int levels = trial % 2 ? 0 : std::uniform_int_distribution<int>(2, 20)(rng);
        std::vector<double> s(n);
        std::vector<int> y(n);
        for (std::size_t i = 0; i < n; ++i) {
            s[i] = levels ? std::uniform_int_distribution<int>(0, levels - 1)(rng) / static_cast<double>(levels)
                          : uniform01(rng);
            y[i] = bernoulli(rng, 0.5) ? 1 : 0;
        }
        y[0] = 1;
        y[1] = 0;
        std::shuffle(y.begin(), y.end(), rng);
        if (learner::roc_auc(s, y).auc != pairwise_auc(s, y)) ++mismatches;
    }
    return {mismatches == 0, fmt::format("1000 sets, n <= {}, {} mismatches", max_n, mismatches)};
}

// ------------------------------------------------------------------ forest

Outcome forest_sanity() {
    const auto data = separable_corpus();
    learner::ForestConfig cfg;
    cfg.seed = 7;
    const double auc = learner::loo_evaluate(data, cfg).auc;

    double sum = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        auto labels = data.labels();
        Rng rng(seed);
        std::shuffle(labels.begin(), labels.end(), rng);
        cfg.seed = seed;
        sum += learner::loo_evaluate(data.with_labels(labels), cfg).auc;
    }
    const double permuted = sum / 20;
    return {auc >= 0.9 && permuted >= 0.4 && permuted <= 0.6,
            fmt::format("n={} d={}: LOO AUC {:.4f} (>= 0.9); permuted-label mean AUC {:.4f} over 20 seeds (in [0.4, 0.6])",
                        data.size(), data.n_features(), auc, permuted)};
}

Outcome importance_ranking() {
    const auto data = separable_corpus();
    const std::size_t informative = 3;
    int good = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        learner::ForestConfig cfg;
        cfg.seed = seed;
        const auto forest = learner::train(data, cfg);
        const auto imp = learner::importance(forest, data);
        double worst_informative = INFINITY, best_noise = -INFINITY;
        for (std::size_t j = 0; j < imp.features.size(); ++j) {
            const double s = imp.features[j].score;
            if (j < informative) worst_informative = std::min(worst_informative, s);
            else best_noise = std::max(best_noise, s);
        }
        good += worst_informative > best_noise;
    }
    return {good >= 18, fmt::format("informative features above all noise in {}/20 seeded runs (>= 18)", good)};
}

// ------------------------------------------------------------------ rules

Outcome rule_engine_oracle() {
    std::size_t combos = 0, mismatches = 0;
    std::vector<std::string> parts;
    for (const auto c : all_cancer_types) {
        const auto path = t::ruleset_dir() / (std::string(to_string(c)) + ".sample");
        const auto doc = json::parse(read_file(path));
        const auto q = rules::load_ruleset_file(path);
        std::size_t booleans = 0;
        for (const auto& question : q.questions) booleans += question.kind == rules::QuestionKind::boolean;
        const auto visited = t::oracle_enumerate(doc, [&](const json& answers, int age, const std::string& sex) {
            rules::Response r{q.version, {}, age, *parse_sex(sex)};
            for (const auto& [qid, v] : answers.items()) {
                if (v.is_boolean()) r.answers[qid] = v.get<bool>();
                else if (v.is_number_integer()) r.answers[qid] = v.get<std::int64_t>();
                else r.answers[qid] = v.get<std::string>();
            }
            const auto got = rules::score(q, r);
            const auto want = t::oracle_fired(doc, answers, age, sex);
            if (got.fired_rules != want || (got.scs == Scs::high) != !want.empty()) ++mismatches;
        });
        combos += visited;
        parts.push_back(fmt::format("{} ({} boolean questions, {} combinations)", to_string(c), booleans, visited));
    }
    std::string detail;
    for (const auto& p : parts) detail += p + "; ";
    return {mismatches == 0 && combos > 0, detail + fmt::format("{} mismatches", mismatches)};
}

// ------------------------------------------------------------------ vocabulary

Outcome vocabulary_threshold() {
    auto corpus = [](int n_users) {
        std::vector<textfeat::UserHistory> hs;
        const Timestamp anchor = parse_rfc3339("2020-03-01T00:00:00Z");
        for (int u = 0; u < n_users; ++u) {
            std::vector<textfeat::QueryRecord> recs{
                {fmt::format("u{}", u), anchor - std::chrono::days{30}, "persistent cough"}};
            if (u == 0) recs.push_back({"u0", anchor - std::chrono::days{10}, "hoarseness"});
            hs.push_back(textfeat::make_history(fmt::format("u{}", u), recs, anchor, 50, Sex::female));
        }
        return textfeat::build_vocabulary(hs, {});
    };
    const bool kept = corpus(20).index_of("hoarseness").has_value();
    const bool dropped = !corpus(21).index_of("hoarseness").has_value();
    return {kept && dropped, fmt::format("1/20 users: {}; 1/21 users: {}", kept ? "kept" : "DROPPED",
                                         dropped ? "dropped" : "KEPT")};
}

// ------------------------------------------------------------------ simulator

Outcome simulator_dynamics() {
    const auto base = adsim::load_sim_config(t::config_dir() / "paperlike.config");
    const auto qs = adsim::load_questionnaires(base.ruleset_dir);
    double first = 0, last = 0;
    int flat = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        auto cfg = base;
        cfg.seed = seed;
        const auto r = adsim::run_campaign(cfg);
        first += adsim::summarize(r.days, 0, 5).mean;
        last += adsim::summarize_last(r.days, 10).mean;

        cfg.learner.kind = adsim::LearnerKind::random_baseline;
        const auto b = adsim::run_campaign(cfg);
        std::vector<double> day, rate;
        for (const auto& d : b.days) {
            day.push_back(d.day);
            rate.push_back(d.conversion_rate());
        }
        flat += statlab::spearman(day, rate).p_value > 0.05;
    }
    first /= 20;
    last /= 20;
    const bool ok = last > 2 * first && last >= 0.08 && last <= 0.14 && flat >= 16;
    return {ok, fmt::format("first-5-day mean {:.4f}, last-10-day mean {:.4f} (> 2x, in [0.08, 0.14]); "
                            "random baseline Spearman p > 0.05 in {}/20 seeds (>= 16)",
                            first, last, flat)};
}

// ------------------------------------------------------------------ OLS

Outcome ols_checks() {
    Rng rng(424242);
    std::normal_distribution<double> normal(0.0, 1.0);
    double worst = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const auto n = std::uniform_int_distribution<std::size_t>(10, 500)(rng);
        const auto k = std::uniform_int_distribution<std::size_t>(1, 5)(rng);
        std::vector<std::vector<double>> rows;
        std::vector<double> y;
        statlab::Matrix X(n, k + 1);
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<double> row{1.0};
            double yi = normal(rng);
            for (std::size_t j = 0; j < k; ++j) {
                row.push_back(3.0 * normal(rng) + static_cast<double>(j));
                yi += (0.5 - 0.3 * static_cast<double>(j)) * row.back();
            }
            for (std::size_t j = 0; j <= k; ++j) X(i, j) = row[j];
            rows.push_back(std::move(row));
            y.push_back(yi);
        }
        const auto fit = statlab::ols_fit(y, X);
        const auto oracle = t::normal_equations(rows, y);
        for (std::size_t j = 0; j <= k; ++j)
            worst = std::max(worst, std::abs(fit.coefficients[j] - oracle[j]) / std::max(std::abs(oracle[j]), 1e-300));
    }

    const std::vector<std::tuple<double, double, double>> table{
        {2.0281, 36, 0.975}, {1.6883, 36, 0.95}, {12.706, 1, 0.975}, {2.086, 20, 0.975},
        {2.576, 1e6, 0.995}, {-1.812, 10, 0.05}, {3.365, 5, 0.99},   {0.0, 3, 0.5}};
    double worst_t = 0;
    for (const auto& [x, df, p] : table) worst_t = std::max(worst_t, std::abs(statlab::student_t_cdf(x, df) - p));

    int signs = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        statlab::CountryGenerator g;
        g.n_countries = 40;
        g.min_impressions = statlab::default_min_impressions;
        g.seed = seed;
        const auto rows = statlab::filter_countries(statlab::generate_countries(g));
        const auto r = statlab::country_ctr_model(rows);
        signs += r.n == 40 && r.coefficients[2] > 0 && r.coefficients[3] < 0;
    }
    return {worst <= 1e-9 && worst_t <= 1e-3 && signs >= 19,
            fmt::format("max relative coefficient error {:.2e} over 100 instances (<= 1e-9); "
                        "max t-CDF error {:.2e} over {} table values (<= 1e-3); slope signs recovered at n=40 in "
                        "{}/20 seeds (>= 19)",
                        worst, worst_t, table.size(), signs)};
}

// ------------------------------------------------------------------ service

Outcome service_integrity() {
    const auto dir = t::scratch_dir("acceptance-service");
    const auto log_path = dir / "events.jsonl";

    auto cfg = adsim::load_sim_config(t::config_dir() / "paperlike.config");
    cfg.seed = 2018;
    cfg.campaign.cost_per_click = 0.03; // 500 clicks a day
    cfg.campaign.days = 22;
    const auto& qs = t::shipped_questionnaires();
    const auto pop = adsim::generate_population(cfg.population, derive_seed(cfg.seed, 0, 0x909));

    std::vector<adsim::FunnelStats> served;
    std::map<std::string, service::Session> live;
    std::size_t sessions = 0, ordered_days = 0, matching_days = 0, conversions = 0, loopback = 0, dup = 0;
    int race_ok = 0;
    bool undelivered = false;
    std::vector<adsim::FunnelStats> sim_days;
    {
        t::ServiceHarness h(log_path, cfg.seed);
        service::ServiceFunnelBackend backend(*h.svc, h.ads, h.clock);
        sim_days = adsim::run_campaign(cfg, pop, qs, &backend).days;

        // 100-way race on post-consent, on five fresh HIGH sessions.
        for (int k = 0; k < 5; ++k) {
            const auto id = h.click();
            h.svc->record_consent(id, service::ConsentStage::pre, true);
            h.svc->submit_answers(id, t::breast_high());
            std::atomic<int> accepted{0};
            std::atomic<bool> go{false};
            std::vector<std::thread> threads;
            for (int i = 0; i < 100; ++i)
                threads.emplace_back([&] {
                    while (!go) std::this_thread::yield();
                    try {
                        h.svc->record_consent(id, service::ConsentStage::post, true);
                        ++accepted;
                    } catch (const service::ServiceError&) {
                    }
                });
            go = true;
            for (auto& th : threads) th.join();
            std::size_t emitted = 0;
            for (const auto& e : h.log->snapshot())
                emitted += e.session_id == id && e.kind == service::EventKind::conversion_emitted;
            race_ok += accepted == 1 && emitted == 1 && h.ads.received(id);
        }

        served = h.svc->funnel(cfg.campaign.start_date,
                               cfg.campaign.start_date + std::chrono::days{static_cast<int>(cfg.campaign.days) - 1});
        sessions = h.svc->session_count();
        std::map<std::string, int> per_session;
        for (const auto& e : h.log->snapshot())
            if (e.kind == service::EventKind::conversion_emitted) ++per_session[e.session_id];
        for (const auto& [id, n] : per_session) {
            conversions += n;
            dup += n > 1;
        }
        loopback = h.ads.count();
        undelivered = h.svc->undelivered_conversions() > 0;
        for (const auto& e : h.log->snapshot())
            if (e.kind == service::EventKind::click) live[e.session_id] = *h.svc->find(e.session_id);
    }
    for (std::size_t d = 0; d < served.size(); ++d) {
        ordered_days += served[d].ordered();
        const auto& s = sim_days.at(d);
        matching_days += served[d].clicks == s.clicks && served[d].starts == s.starts &&
                         served[d].completions == s.completions && served[d].conversions == s.conversions;
    }

    // Restart from the log file.
    t::ServiceHarness again(log_path, cfg.seed + 1);
    const auto replayed = again.svc->funnel(cfg.campaign.start_date, cfg.campaign.start_date +
                                                                         std::chrono::days{static_cast<int>(cfg.campaign.days) - 1});
    std::size_t same_sessions = 0;
    for (const auto& [id, s] : live) {
        const auto r = again.svc->find(id);
        same_sessions += r && r->state == s.state && r->answers == s.answers && r->result == s.result &&
                         r->conversion_emitted == s.conversion_emitted && r->last_seq == s.last_seq;
    }
    const bool replay_ok = replayed == served && same_sessions == live.size();

    const bool ok = sessions >= 10000 && ordered_days == served.size() && matching_days == served.size() &&
                    race_ok == 5 && dup == 0 && conversions == loopback && !undelivered && replay_ok;
    return {ok, fmt::format("{} sessions over {} days; ordering held on {}/{} days, simulator counts matched on {}/{}; "
                            "race: one conversion in {}/5 100-way trials; {} conversions, {} duplicated, {} delivered; "
                            "replay {} ({} sessions identical)",
                            sessions, served.size(), ordered_days, served.size(), matching_days, served.size(),
                            race_ok, conversions, dup, loopback, replay_ok ? "identical" : "DIFFERENT",
                            same_sessions)};
}

} // namespace

int main() {
    const std::vector<Criterion> criteria{
        {"roc-auc-oracle", 10, roc_oracle},
        {"forest-sanity", 120, forest_sanity},
        {"importance-ranking", 0, importance_ranking},
        {"rule-engine-exhaustive-oracle", 0, rule_engine_oracle},
        {"vocabulary-threshold", 0, vocabulary_threshold},
        {"simulator-learning-dynamics", 300, simulator_dynamics},
        {"ols-and-t-distribution", 0, ols_checks},
        {"service-funnel-integrity", 180, service_integrity},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::string timing = fmt::format("{:.1f} s", secs);
        if (c.time_limit_s > 0) {
            timing += fmt::format(" of {:.0f} s allowed", c.time_limit_s);
            if (secs >= c.time_limit_s) {
                o.pass = false;
                timing += ", TOO SLOW";
            }
        }
        failed += !o.pass;
        std::cout << fmt::format("{} {}: {} [{}]", o.pass ? "PASS" : "FAIL", c.name, o.detail, timing) << std::endl;
    }
    std::cout << fmt::format("{} of {} criteria passed", criteria.size() - failed, criteria.size()) << std::endl;
    return failed == 0 ? 0 : 1;
}
