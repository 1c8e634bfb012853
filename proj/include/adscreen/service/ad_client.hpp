#pragma once

#include "adscreen/common/time.hpp"
#include "adscreen/common/types.hpp"
#include "adscreen/service/session.hpp"

#include <cstdio>
#include <filesystem>
#include <functional>
#include <mutex>
#include <set>
#include <string>

namespace adscreen::service {

// Offline conversion reported to the ad platform. The session id is the
// idempotency key; no answers or query text are ever included.
struct ConversionSignal {
    std::string session_id;
    CancerType cancer = CancerType::breast;
    CampaignMeta meta;
    Timestamp ts;
};

nlohmann::json to_json(const ConversionSignal& c);

class AdPlatformClient {
public:
    virtual ~AdPlatformClient() = default;
    // Delivers at least once; the receiving side deduplicates by session id.
    // Throws on delivery failure.
    virtual void send(const ConversionSignal& c) = 0;
};

// Appends signals as JSON lines to a file, skipping ids it has already
// written (including ones found in the file at startup).
class RecordingAdClient final : public AdPlatformClient {
public:
    explicit RecordingAdClient(const std::filesystem::path& path);
    ~RecordingAdClient() override;
    void send(const ConversionSignal& c) override;
    std::size_t delivered() const;

private:
    mutable std::mutex mutex_;
    std::filesystem::path path_;
    std::FILE* file_ = nullptr;
    std::set<std::string> seen_;
};

// Hands signals to a callback (used by the simulator to observe conversions).
class LoopbackAdClient final : public AdPlatformClient {
public:
    using Sink = std::function<void(const ConversionSignal&)>;
    explicit LoopbackAdClient(Sink sink = {}) : sink_(std::move(sink)) {}
    void send(const ConversionSignal& c) override;
    bool received(const std::string& session_id) const;
    std::size_t count() const;

private:
    mutable std::mutex mutex_;
    Sink sink_;
    std::set<std::string> seen_;
};

class NullAdClient final : public AdPlatformClient {
public:
    void send(const ConversionSignal&) override {}
};

} // namespace adscreen::service
