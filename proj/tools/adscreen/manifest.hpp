#pragma once

#include "adscreen/common/time.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace adscreen::cli {

// Hash of the effective configuration: FNV-1a over the compact JSON dump
// (object keys are sorted, so the text is canonical).
std::string config_hash(const nlohmann::json& config);

// Collects the files a run writes under its output directory and finishes
// with manifest.json.
class RunOutputs {
public:
    RunOutputs(std::string subcommand, std::filesystem::path dir, nlohmann::json config,
               std::optional<std::uint64_t> seed);

    const std::filesystem::path& dir() const { return dir_; }
    void write(const std::string& name, std::string_view content);
    // Adds component versions (e.g. ruleset versions) to the manifest.
    void add_version(const std::string& component, const std::string& version);
    void finish();

private:
    std::string subcommand_;
    std::filesystem::path dir_;
    nlohmann::json config_;
    std::optional<std::uint64_t> seed_;
    Timestamp started_;
    std::vector<std::string> outputs_;
    nlohmann::json versions_;
};

} // namespace adscreen::cli
