#pragma once

#include "adscreen/service/session.hpp"

#include <cstdio>
#include <filesystem>
#include <mutex>
#include <optional>
#include <vector>

namespace adscreen::service {

// Append-only session event log. Each append gets the next sequence number
// and, when backed by a file, is written as one JSON line and flushed before
// append() returns.
class EventLog {
public:
    EventLog(); // in memory only
    // Opens (creating if needed) a JSONL file and loads the events already in
    // it. Throws ParseError naming "<path>:<line>" for a corrupt line.
    explicit EventLog(const std::filesystem::path& path);
    ~EventLog();

    EventLog(const EventLog&) = delete;
    EventLog& operator=(const EventLog&) = delete;

    SessionEvent append(const std::string& session_id, EventKind kind, nlohmann::json payload, Timestamp ts);

    // Copy of the log prefix at the moment of the call.
    std::vector<SessionEvent> snapshot() const;
    std::size_t size() const;
    const std::optional<std::filesystem::path>& path() const { return path_; }

    static std::vector<SessionEvent> read_file(const std::filesystem::path& path);

private:
    mutable std::mutex mutex_;
    std::vector<SessionEvent> events_;
    std::optional<std::filesystem::path> path_;
    std::FILE* file_ = nullptr;
};

} // namespace adscreen::service
