#include "commands.hpp"

#include "manifest.hpp"
#include "svg.hpp"

#include "adscreen/adsim/simulator.hpp"
#include "adscreen/common/error.hpp"
#include "adscreen/common/io.hpp"
#include "adscreen/learner/evaluation.hpp"
#include "adscreen/learner/model_io.hpp"
#include "adscreen/rules/questionnaire.hpp"
#include "adscreen/service/http.hpp"
#include "adscreen/service/service.hpp"
#include "adscreen/statlab/country.hpp"
#include "adscreen/statlab/statlab.hpp"
#include "adscreen/textfeat/query_log.hpp"

#include <fmt/format.h>

#include <atomic>
#include <csignal>
#include <cstdlib>
#include <iostream>
#include <set>
#include <sstream>
#include <thread>

namespace adscreen::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const fs::path default_data_dir = ADSCREEN_DATA_DIR;

// A --config file for the smaller subcommands: a JSON object whose keys must
// all be known. Relative paths resolve against the file's directory.
class ConfigFile {
public:
    ConfigFile(const std::optional<fs::path>& path, std::set<std::string> known) {
        if (!path) return;
        base_ = path->parent_path();
        try {
            doc_ = json::parse(read_file(*path));
        } catch (const json::parse_error& e) {
            throw ParseError(std::string("malformed config: ") + e.what(), path->string());
        }
        if (!doc_.is_object()) throw ValidationError("config must be a JSON object", path->string());
        for (const auto& [key, v] : doc_.items())
            if (!known.count(key)) throw ValidationError("unknown config key '" + key + "'", key);
    }

    std::optional<fs::path> path(const std::string& key) const {
        if (!doc_.contains(key)) return std::nullopt;
        if (!doc_[key].is_string()) throw ValidationError("'" + key + "' must be a path string", key);
        const fs::path p = doc_[key].get<std::string>();
        return p.is_relative() ? base_ / p : p;
    }

    template <typename T>
    std::optional<T> get(const std::string& key) const {
        if (!doc_.contains(key) || doc_[key].is_null()) return std::nullopt;
        try {
            return doc_[key].get<T>();
        } catch (const json::exception&) {
            throw ValidationError("config key '" + key + "' has the wrong type", key);
        }
    }

    const json& doc() const { return doc_; }

private:
    json doc_ = json::object();
    fs::path base_;
};

template <typename T>
T pick(const std::optional<T>& flag, const std::optional<T>& config, T fallback) {
    return flag ? *flag : config ? *config : fallback;
}

fs::path require(const std::optional<fs::path>& flag, const std::optional<fs::path>& config, const char* what) {
    if (flag) return *flag;
    if (config) return *config;
    throw ValidationError(std::string("missing required input: ") + what, what);
}

std::string to_csv(auto writer) {
    std::ostringstream out;
    writer(out);
    return out.str();
}

std::vector<textfeat::UserHistory> load_histories(const fs::path& logs, const fs::path& profiles) {
    auto records = textfeat::load_query_log(logs);
    const auto people = textfeat::load_profiles(profiles);
    return textfeat::filter_eligible(textfeat::assemble_histories(std::move(records), people));
}

json window_json(const adsim::WindowSummary& w) { return {{"mean", w.mean}, {"sd", w.sd}, {"days", w.days}}; }

} // namespace

int cmd_vocab(const VocabOptions& o) {
    const ConfigFile cfg(o.config, {"logs", "profiles", "stopwords"});
    const auto logs = require(o.logs, cfg.path("logs"), "logs");
    const auto profiles = require(o.profiles, cfg.path("profiles"), "profiles");
    const auto stop_path = pick(o.stopwords, cfg.path("stopwords"), default_data_dir / "stopwords.json");

    const auto histories = load_histories(logs, profiles);
    const auto stopwords = textfeat::load_stopwords(stop_path);
    const auto vocab = textfeat::build_vocabulary(histories, stopwords);

    RunOutputs out("vocab", o.out,
                   {{"logs", logs.string()}, {"profiles", profiles.string()}, {"stopwords", stop_path.string()}},
                   std::nullopt);
    out.write("vocabulary.json", textfeat::vocabulary_to_json(vocab));
    out.finish();
    std::cout << fmt::format("vocabulary: {} terms from {} users -> {}\n", vocab.size(), vocab.built_from_n_users(),
                             (o.out / "vocabulary.json").string());
    return 0;
}

int cmd_train_eval(const TrainEvalOptions& o) {
    const ConfigFile cfg(o.config, {"dataset", "logs", "profiles", "lexicon", "vocabulary", "stopwords", "seed", "forest"});
    learner::ForestConfig forest;
    if (cfg.doc().contains("forest")) {
        const json& f = cfg.doc()["forest"];
        if (!f.is_object()) throw ValidationError("'forest' must be an object", "forest");
        for (const auto& [key, v] : f.items()) {
            if (!v.is_number_unsigned() && !v.is_null())
                throw ValidationError("forest." + key + " must be a non-negative integer", key);
            if (key == "n_trees") forest.n_trees = v.get<std::size_t>();
            else if (key == "min_leaf") forest.min_leaf = v.get<std::size_t>();
            else if (key == "max_features") forest.max_features = v.is_null() ? std::nullopt : std::optional(v.get<std::size_t>());
            else if (key == "max_depth") forest.max_depth = v.is_null() ? std::nullopt : std::optional(v.get<std::size_t>());
            else if (key == "bootstrap_size") forest.bootstrap_size = v.is_null() ? std::nullopt : std::optional(v.get<std::size_t>());
            else throw ValidationError("unknown forest key '" + key + "'", key);
        }
    }
    if (o.trees) forest.n_trees = *o.trees;
    forest.seed = pick(o.seed, cfg.get<std::uint64_t>("seed"), std::uint64_t{1});
    forest.threads = o.threads;

    json effective{{"seed", forest.seed},
                   {"forest",
                    {{"n_trees", forest.n_trees},
                     {"min_leaf", forest.min_leaf},
                     {"max_features", forest.max_features ? json(*forest.max_features) : json(nullptr)},
                     {"max_depth", forest.max_depth ? json(*forest.max_depth) : json(nullptr)},
                     {"bootstrap_size", forest.bootstrap_size ? json(*forest.bootstrap_size) : json(nullptr)}}}};

    learner::Dataset data;
    std::string features_csv;
    if (auto dataset = o.dataset ? o.dataset : cfg.path("dataset")) {
        data = learner::load_dataset_csv(*dataset);
        effective["dataset"] = dataset->string();
    } else {
        const auto logs = require(o.logs, cfg.path("logs"), "dataset or logs");
        const auto profiles = require(o.profiles, cfg.path("profiles"), "profiles");
        const auto lex_path = pick(o.lexicon, cfg.path("lexicon"), default_data_dir / "lexicon.json");
        auto histories = load_histories(logs, profiles);
        std::erase_if(histories, [](const auto& h) { return !h.label; });
        if (histories.empty()) throw ValidationError("no labeled users with enough history", logs.string());

        textfeat::Vocabulary vocab;
        if (auto vpath = o.vocabulary ? o.vocabulary : cfg.path("vocabulary")) {
            vocab = textfeat::vocabulary_from_json(read_file(*vpath));
            effective["vocabulary"] = vpath->string();
        } else {
            const auto stop_path = pick(o.stopwords, cfg.path("stopwords"), default_data_dir / "stopwords.json");
            vocab = textfeat::build_vocabulary(histories, textfeat::load_stopwords(stop_path));
            effective["stopwords"] = stop_path.string();
        }
        const auto lex = textfeat::load_lexicon(lex_path);
        const auto names = textfeat::feature_names(lex, vocab);
        std::vector<textfeat::FeatureVector> rows;
        data = learner::Dataset(names);
        for (const auto& h : histories) {
            rows.push_back(textfeat::vectorize(h, lex, vocab));
            const auto x = rows.back().dense();
            data.add(x, *h.label == Scs::high ? 1 : 0);
        }
        features_csv = to_csv([&](std::ostream& s) { textfeat::write_feature_csv(s, names, rows); });
        effective["logs"] = logs.string();
        effective["profiles"] = profiles.string();
        effective["lexicon"] = lex_path.string();
    }

    const auto report = learner::loo_evaluate(data, forest);
    const auto model = learner::train(data, forest);
    const auto imp = learner::importance(model, data);

    RunOutputs out("train-eval", o.out, effective, forest.seed);
    if (!features_csv.empty()) out.write("features.csv", features_csv);
    out.write("eval.csv", to_csv([&](std::ostream& s) { learner::write_eval_csv(s, report); }));
    out.write("roc.csv", to_csv([&](std::ostream& s) { learner::write_roc_csv(s, report.roc_points); }));
    out.write("importance.csv", to_csv([&](std::ostream& s) { learner::write_importance_csv(s, imp); }));
    out.write("model.json", learner::forest_to_json(model));

    json top = json::array();
    const auto ranking = imp.ranking();
    for (std::size_t k = 0; k < std::min<std::size_t>(10, ranking.size()); ++k)
        top.push_back(imp.features[ranking[k]].feature);
    json summary{{"auc", report.auc},
                 {"samples", data.size()},
                 {"positives", report.positives},
                 {"negatives", report.negatives},
                 {"skipped_folds", report.skipped_folds},
                 {"forests_trained", report.forests_trained},
                 {"top_features", top}};
    out.write("report.json", summary.dump(2) + "\n");
    out.finish();
    std::cout << fmt::format("leave-one-out AUC {:.4f} over {} samples ({} HIGH, {} LOW)\n", report.auc, data.size(),
                             report.positives, report.negatives);
    return 0;
}

int cmd_simulate(const SimulateOptions& o) {
    auto cfg = adsim::load_sim_config(o.config);
    if (o.seed) cfg.seed = *o.seed;
    if (o.days) cfg.campaign.days = *o.days;
    if (o.learner) {
        const auto kind = adsim::parse_learner_kind(*o.learner);
        if (!kind) throw ValidationError("unknown learner '" + *o.learner + "'", *o.learner);
        cfg.learner.kind = *kind;
    }
    adsim::validate(cfg.campaign);
    adsim::validate(cfg.learner);

    const auto effective = adsim::sim_config_to_json(cfg);
    const auto qs = adsim::load_questionnaires(cfg.ruleset_dir);
    const auto result = adsim::run_campaign(cfg);

    RunOutputs out("simulate", o.out, effective, cfg.seed);
    for (const auto& [cancer, q] : qs) out.add_version(fmt::format("ruleset_{}", to_string(cancer)), q.version);
    out.write("funnel.csv", to_csv([&](std::ostream& s) { adsim::write_funnel_csv(s, result.days); }));
    for (const auto& [cancer, days] : result.by_cancer)
        out.write(fmt::format("funnel_{}.csv", to_string(cancer)),
                  to_csv([&](std::ostream& s) { adsim::write_funnel_csv(s, days); }));
    out.write("countries.csv", to_csv([&](std::ostream& s) { statlab::write_country_csv(s, result.countries); }));
    out.write("policy.json", json(result.policy_snapshots).dump() + "\n");

    std::vector<double> day_index, rate;
    for (const auto& d : result.days) {
        day_index.push_back(d.day);
        rate.push_back(d.conversion_rate());
    }
    json summary{{"days", result.days.size()}, {"learner", adsim::to_string(cfg.learner.kind)}};
    const auto n = result.days.size();
    if (n >= 5) summary["first_5_days"] = window_json(adsim::summarize(result.days, 0, 5));
    if (n >= 10) summary["last_10_days"] = window_json(adsim::summarize_last(result.days, 10));
    if (n >= 10)
        summary["last_10_days_per_completion"] =
            window_json(adsim::summarize_last(result.days, 10, adsim::FunnelMetric::conversion_per_completion));
    summary["impressions"] = window_json(adsim::summarize(result.days, 0, n, adsim::FunnelMetric::impressions));
    summary["ctr"] = window_json(adsim::summarize(result.days, 0, n, adsim::FunnelMetric::ctr));
    if (n >= 3) {
        const auto rho = statlab::spearman(day_index, rate);
        summary["trend_spearman"] = {{"rho", rho.rho}, {"p_value", rho.p_value}};
    }
    out.write("summary.json", summary.dump(2) + "\n");
    if (o.plot)
        out.write("conversion_rate.svg",
                  conversion_rate_svg(result.days, fmt::format("Daily conversion rate ({})",
                                                               adsim::to_string(cfg.learner.kind))));
    out.finish();

    if (n >= 10 && n >= 5)
        std::cout << fmt::format("{} days; conversion rate first 5 days {:.2f}%, last 10 days {:.2f}% (sd {:.2f}%)\n", n,
                                 100 * summary["first_5_days"]["mean"].get<double>(),
                                 100 * summary["last_10_days"]["mean"].get<double>(),
                                 100 * summary["last_10_days"]["sd"].get<double>());
    else
        std::cout << fmt::format("{} days simulated -> {}\n", n, (o.out / "funnel.csv").string());
    return 0;
}

int cmd_geo(const GeoOptions& o) {
    const ConfigFile cfg(o.config, {"countries", "min_impressions"});
    const auto min_impr = pick(o.min_impressions, cfg.get<std::int64_t>("min_impressions"),
                               std::int64_t{statlab::default_min_impressions});
    json effective{{"min_impressions", min_impr}};

    std::vector<statlab::CountryStats> rows;
    std::optional<std::uint64_t> seed;
    if (o.generate) {
        statlab::CountryGenerator g;
        g.n_countries = *o.generate;
        g.seed = o.seed.value_or(1);
        seed = g.seed;
        rows = statlab::generate_countries(g);
        effective["generate"] = {{"n_countries", g.n_countries}, {"seed", g.seed}};
    } else {
        const auto path = require(o.countries, cfg.path("countries"), "countries");
        rows = statlab::load_country_csv(path);
        effective["countries"] = path.string();
    }
    const auto kept = statlab::filter_countries(rows, min_impr);
    const auto report = statlab::country_ctr_model(kept);

    RunOutputs out("geo", o.out, effective, seed);
    if (o.generate)
        out.write("countries.csv", to_csv([&](std::ostream& s) { statlab::write_country_csv(s, rows); }));
    out.write("regression.csv", to_csv([&](std::ostream& s) { statlab::write_report_csv(s, report); }));
    const auto text = fmt::format("{} of {} countries with at least {} impressions\n", kept.size(), rows.size(),
                                  min_impr) +
                      statlab::format_report(report);
    out.write("regression.txt", text);
    out.finish();
    std::cout << text;
    return 0;
}

namespace {

service::HttpServer* running_server = nullptr;

extern "C" void on_signal(int) {
    if (running_server) running_server->stop();
}

} // namespace

int cmd_serve(const ServeOptionsCli& o) {
    const ConfigFile cfg(o.config, {"listen", "ruleset_dir", "event_log", "ad_client", "static_dir"});
    service::ServeOptions defaults;
    if (auto v = cfg.get<std::string>("listen")) std::tie(defaults.host, defaults.port) = service::parse_listen(*v);
    if (auto v = cfg.path("ruleset_dir")) defaults.ruleset_dir = *v;
    if (auto v = cfg.path("event_log")) defaults.event_log = *v;
    if (auto v = cfg.get<std::string>("ad_client")) defaults.ad_client = *v;
    if (auto v = cfg.path("static_dir")) defaults.static_dir = *v;
    const auto opts = service::serve_options_from_env(
        [](const std::string& name) -> std::optional<std::string> {
            const char* v = std::getenv(name.c_str());
            return v ? std::optional<std::string>(v) : std::nullopt;
        },
        defaults);

    service::ServiceConfig scfg;
    scfg.questionnaires = adsim::load_questionnaires(opts.ruleset_dir);
    service::EventLog log(opts.event_log);
    const auto ads = service::make_ad_client(opts.ad_client);
    service::SystemClock clock;
    service::RandomTokenSource tokens;
    service::ScreeningService svc(std::move(scfg), log, *ads, clock, tokens);
    service::HttpServer server(svc, opts.static_dir);
    const int port = server.bind(opts.host, opts.port);

    running_server = &server;
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    std::atomic<bool> done{false};
    std::thread sweeper([&] {
        using namespace std::chrono_literals;
        while (!done) {
            for (int i = 0; i < 600 && !done; ++i) std::this_thread::sleep_for(100ms);
            if (!done) svc.expire_idle();
        }
    });
    std::cerr << json{{"level", "info"},
                      {"event", "listening"},
                      {"host", opts.host},
                      {"port", port},
                      {"sessions_replayed", svc.session_count()},
                      {"event_log", opts.event_log.string()}}
                     .dump()
              << std::endl;
    server.serve();
    done = true;
    sweeper.join();
    running_server = nullptr;
    return 0;
}

int cmd_validate_ruleset(const std::vector<fs::path>& paths) {
    for (const auto& p : paths) {
        try {
            const auto q = rules::load_ruleset_file(p);
            std::cout << fmt::format("OK {} ({} {}, {} questions, {} rules)\n", p.string(), to_string(q.cancer_type),
                                     q.version, q.questions.size(), q.rules.size());
        } catch (const Error& e) {
            // Keep the failing file in the message; the subject stays the offending id.
            throw Error(e.code(), p.string() + ": " + e.what(), e.subject().empty() ? p.string() : e.subject());
        }
    }
    return 0;
}

} // namespace adscreen::cli
