#include "adscreen/service/event_log.hpp"

#include "adscreen/common/error.hpp"

#include <fstream>
#include <string>

namespace adscreen::service {

EventLog::EventLog() = default;

EventLog::EventLog(const std::filesystem::path& path) : path_(path) {
    if (std::filesystem::exists(path)) events_ = read_file(path);
    file_ = std::fopen(path.c_str(), "ab");
    if (!file_) throw IoError("cannot open event log for appending", path.string());
}

EventLog::~EventLog() {
    if (file_) std::fclose(file_);
}

std::vector<SessionEvent> EventLog::read_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read event log", path.string());
    std::vector<SessionEvent> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const std::string where = path.string() + ":" + std::to_string(line_no);
        try {
            out.push_back(event_from_json(nlohmann::json::parse(line)));
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(std::string("bad event: ") + e.what(), where);
        } catch (const Error& e) {
            throw ParseError(std::string("bad event: ") + e.what(), where);
        }
        if (out.size() > 1 && out.back().seq <= out[out.size() - 2].seq)
            throw ParseError("event sequence numbers must increase", where);
    }
    return out;
}

SessionEvent EventLog::append(const std::string& session_id, EventKind kind, nlohmann::json payload, Timestamp ts) {
    std::lock_guard lock(mutex_);
    SessionEvent e{events_.empty() ? 1 : events_.back().seq + 1, session_id, kind, std::move(payload), ts};
    if (file_) {
        const std::string line = to_json(e).dump() + "\n";
        if (std::fwrite(line.data(), 1, line.size(), file_) != line.size() || std::fflush(file_) != 0)
            throw IoError("event log write failed", path_->string());
    }
    events_.push_back(e);
    return e;
}

std::vector<SessionEvent> EventLog::snapshot() const {
    std::lock_guard lock(mutex_);
    return events_;
}

std::size_t EventLog::size() const {
    std::lock_guard lock(mutex_);
    return events_.size();
}

} // namespace adscreen::service
