#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace adscreen::cli {

// Command-line values; anything unset falls back to the --config file, then
// to built-in defaults.
struct VocabOptions {
    std::optional<std::filesystem::path> config, logs, profiles, stopwords;
    std::filesystem::path out = "out";
};

struct TrainEvalOptions {
    std::optional<std::filesystem::path> config, dataset, logs, profiles, lexicon, vocabulary, stopwords;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> trees;
    unsigned threads = 0;
    std::filesystem::path out = "out";
};

struct SimulateOptions {
    std::filesystem::path config;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> learner;
    std::optional<std::size_t> days;
    bool plot = false;
    std::filesystem::path out = "out";
};

struct GeoOptions {
    std::optional<std::filesystem::path> config, countries;
    std::optional<std::int64_t> min_impressions;
    std::optional<std::size_t> generate; // synthesize this many countries instead of reading a CSV
    std::optional<std::uint64_t> seed;
    std::filesystem::path out = "out";
};

struct ServeOptionsCli {
    std::optional<std::filesystem::path> config;
};

int cmd_vocab(const VocabOptions& o);
int cmd_train_eval(const TrainEvalOptions& o);
int cmd_simulate(const SimulateOptions& o);
int cmd_geo(const GeoOptions& o);
int cmd_serve(const ServeOptionsCli& o);
int cmd_validate_ruleset(const std::vector<std::filesystem::path>& paths);

} // namespace adscreen::cli
