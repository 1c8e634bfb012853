#include "adscreen/textfeat/textfeat.hpp"

#include <algorithm>

namespace adscreen::textfeat {

std::vector<std::string> normalize(std::string_view text) {
    std::vector<std::string> tokens;
    std::string current;
    for (unsigned char c : text) {
        if ((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9')) {
            current.push_back(static_cast<char>(c));
        } else if (c >= 'A' && c <= 'Z') {
            current.push_back(static_cast<char>(c - 'A' + 'a'));
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

std::chrono::seconds UserHistory::span() const {
    if (records.size() < 2) return std::chrono::seconds{0};
    return records.back().timestamp - records.front().timestamp;
}

UserHistory make_history(std::string user_id, std::vector<QueryRecord> records, Timestamp anchor,
                         int age, Sex sex, std::optional<Scs> label) {
    UserHistory h;
    h.user_id = std::move(user_id);
    h.anchor = anchor;
    h.age = age;
    h.sex = sex;
    h.label = label;
    const auto earliest = anchor - history_window;
    for (auto& r : records)
        if (r.timestamp >= earliest && r.timestamp <= anchor) h.records.push_back(std::move(r));
    std::stable_sort(h.records.begin(), h.records.end(),
                     [](const QueryRecord& a, const QueryRecord& b) { return a.timestamp < b.timestamp; });
    return h;
}

std::vector<UserHistory> filter_eligible(std::vector<UserHistory> histories) {
    std::vector<UserHistory> kept;
    for (auto& h : histories)
        if (h.span() >= min_history_span) kept.push_back(std::move(h));
    return kept;
}

} // namespace adscreen::textfeat
