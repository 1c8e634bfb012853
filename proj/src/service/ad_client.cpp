#include "adscreen/service/ad_client.hpp"

#include "adscreen/common/error.hpp"

#include <fstream>

namespace adscreen::service {

nlohmann::json to_json(const ConversionSignal& c) {
    return {{"idempotency_key", c.session_id},
            {"cancer_type", to_string(c.cancer)},
            {"campaign_id", c.meta.campaign_id},
            {"creative_id", c.meta.creative_id},
            {"keyword_id", c.meta.keyword_id},
            {"ts", format_rfc3339(c.ts)}};
}

RecordingAdClient::RecordingAdClient(const std::filesystem::path& path) : path_(path) {
    if (std::filesystem::exists(path)) {
        std::ifstream in(path);
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            try {
                seen_.insert(nlohmann::json::parse(line).at("idempotency_key").get<std::string>());
            } catch (const nlohmann::json::exception&) {
                throw ParseError("bad conversion record", path.string());
            }
        }
    }
    file_ = std::fopen(path.c_str(), "ab");
    if (!file_) throw IoError("cannot open conversion log", path.string());
}

RecordingAdClient::~RecordingAdClient() {
    if (file_) std::fclose(file_);
}

void RecordingAdClient::send(const ConversionSignal& c) {
    std::lock_guard lock(mutex_);
    if (seen_.count(c.session_id)) return;
    const std::string line = to_json(c).dump() + "\n";
    if (std::fwrite(line.data(), 1, line.size(), file_) != line.size() || std::fflush(file_) != 0)
        throw IoError("conversion log write failed", path_.string());
    seen_.insert(c.session_id);
}

std::size_t RecordingAdClient::delivered() const {
    std::lock_guard lock(mutex_);
    return seen_.size();
}

void LoopbackAdClient::send(const ConversionSignal& c) {
    {
        std::lock_guard lock(mutex_);
        if (!seen_.insert(c.session_id).second) return;
    }
    if (sink_) sink_(c);
}

bool LoopbackAdClient::received(const std::string& session_id) const {
    std::lock_guard lock(mutex_);
    return seen_.count(session_id) > 0;
}

std::size_t LoopbackAdClient::count() const {
    std::lock_guard lock(mutex_);
    return seen_.size();
}

} // namespace adscreen::service
