#include "manifest.hpp"

#include "adscreen/common/error.hpp"
#include "adscreen/common/io.hpp"
#include "adscreen/learner/model_io.hpp"

#include <chrono>

namespace adscreen::cli {

namespace {

Timestamp now() { return std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now()); }

} // namespace

std::string config_hash(const nlohmann::json& config) { return hex64(fnv1a64(config.dump())); }

RunOutputs::RunOutputs(std::string subcommand, std::filesystem::path dir, nlohmann::json config,
                       std::optional<std::uint64_t> seed)
    : subcommand_(std::move(subcommand)), dir_(std::move(dir)), config_(std::move(config)), seed_(seed),
      started_(now()) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) throw IoError("cannot create output directory: " + ec.message(), dir_.string());
    versions_ = {{"adscreen", ADSCREEN_VERSION}, {"forest_format", learner::model_format_version}};
}

void RunOutputs::write(const std::string& name, std::string_view content) {
    write_file_atomic(dir_ / name, content);
    outputs_.push_back(name);
}

void RunOutputs::add_version(const std::string& component, const std::string& version) {
    versions_[component] = version;
}

void RunOutputs::finish() {
    nlohmann::json m{{"subcommand", subcommand_},
                     {"config_hash", config_hash(config_)},
                     {"config", config_},
                     {"versions", versions_},
                     {"started_at", format_rfc3339(started_)},
                     {"finished_at", format_rfc3339(now())},
                     {"outputs", outputs_}};
    m["seed"] = seed_ ? nlohmann::json(*seed_) : nlohmann::json(nullptr);
    write_file_atomic(dir_ / "manifest.json", m.dump(2) + "\n");
}

} // namespace adscreen::cli
