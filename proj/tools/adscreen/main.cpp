#include "commands.hpp"

#include "adscreen/common/error.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>

using namespace adscreen::cli;

namespace {

int report_error(const std::string& code, const std::string& message, const std::string& subject) {
    nlohmann::json err{{"error", code}, {"message", message}};
    if (!subject.empty()) err["subject"] = subject;
    std::cerr << err.dump() << std::endl;
    return 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Screening-campaign research toolkit", "adscreen"};
    app.set_version_flag("--version", ADSCREEN_VERSION);
    app.require_subcommand(1);

    VocabOptions vocab;
    auto* c_vocab = app.add_subcommand("vocab", "Build the query-term vocabulary from a query log");
    c_vocab->add_option("--config", vocab.config, "JSON with logs/profiles/stopwords paths");
    c_vocab->add_option("--logs", vocab.logs, "Query log (JSON lines)");
    c_vocab->add_option("--profiles", vocab.profiles, "User profiles (JSON lines)");
    c_vocab->add_option("--stopwords", vocab.stopwords, "Stopword list (JSON array)");
    c_vocab->add_option("--out", vocab.out, "Output directory")->capture_default_str();

    TrainEvalOptions te;
    auto* c_te = app.add_subcommand("train-eval", "Leave-one-out forest evaluation and feature importance");
    c_te->add_option("--config", te.config, "JSON with inputs, seed and forest settings");
    c_te->add_option("--dataset", te.dataset, "Feature CSV with a trailing label column");
    c_te->add_option("--logs", te.logs, "Query log (JSON lines)");
    c_te->add_option("--profiles", te.profiles, "Labelled user profiles (JSON lines)");
    c_te->add_option("--lexicon", te.lexicon, "Symptom lexicon");
    c_te->add_option("--vocabulary", te.vocabulary, "Vocabulary from `adscreen vocab`");
    c_te->add_option("--stopwords", te.stopwords, "Stopword list, when building the vocabulary here");
    c_te->add_option("--seed", te.seed, "Master seed");
    c_te->add_option("--trees", te.trees, "Trees per forest");
    c_te->add_option("--threads", te.threads, "Worker threads (0: all cores); results do not depend on it");
    c_te->add_option("--out", te.out, "Output directory")->capture_default_str();

    SimulateOptions sim;
    auto* c_sim = app.add_subcommand("simulate", "Run the budgeted ad-campaign simulation");
    c_sim->add_option("--config", sim.config, "Simulation config (JSON)")->required();
    c_sim->add_option("--seed", sim.seed, "Override the config seed");
    c_sim->add_option("--learner", sim.learner, "online_logistic | thompson_beta_segments | random_baseline");
    c_sim->add_option("--days", sim.days, "Override the campaign length");
    c_sim->add_flag("--plot", sim.plot, "Also write conversion_rate.svg");
    c_sim->add_option("--out", sim.out, "Output directory")->capture_default_str();

    GeoOptions geo;
    auto* c_geo = app.add_subcommand("geo", "Per-country click-through regression");
    c_geo->add_option("--config", geo.config, "JSON with countries path and min_impressions");
    c_geo->add_option("--countries", geo.countries, "Country CSV");
    c_geo->add_option("--min-impressions", geo.min_impressions, "Drop countries with fewer impressions");
    c_geo->add_option("--generate", geo.generate, "Synthesize this many countries instead of reading a CSV");
    c_geo->add_option("--seed", geo.seed, "Seed for --generate");
    c_geo->add_option("--out", geo.out, "Output directory")->capture_default_str();

    ServeOptionsCli serve;
    auto* c_serve = app.add_subcommand("serve", "Run the screening HTTP service");
    c_serve->add_option("--config", serve.config, "JSON with listen/ruleset_dir/event_log/ad_client/static_dir");

    std::vector<std::filesystem::path> rulesets;
    auto* c_val = app.add_subcommand("validate-ruleset", "Check ruleset files");
    c_val->add_option("paths", rulesets, "Ruleset files")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        report_error("usage", e.what(), "");
        return 2;
    }

    try {
        if (*c_vocab) return cmd_vocab(vocab);
        if (*c_te) return cmd_train_eval(te);
        if (*c_sim) return cmd_simulate(sim);
        if (*c_geo) return cmd_geo(geo);
        if (*c_serve) return cmd_serve(serve);
        if (*c_val) return cmd_validate_ruleset(rulesets);
    } catch (const adscreen::Error& e) {
        return report_error(e.code(), e.what(), e.subject());
    } catch (const std::exception& e) {
        return report_error("internal_error", e.what(), "");
    }
    return 1;
}
