#include "adscreen/service/session.hpp"

#include "adscreen/common/error.hpp"

#include <map>

namespace adscreen::service {

std::map<std::string, Session> replay(const std::vector<SessionEvent>& events) {
    std::map<std::string, Session> sessions;
    for (const auto& e : events) {
        if (e.kind == EventKind::click) {
            auto [it, fresh] = sessions.try_emplace(e.session_id);
            if (!fresh) throw Error("invalid_event", "duplicate click for session " + e.session_id, e.session_id);
            apply(it->second, e);
            continue;
        }
        auto it = sessions.find(e.session_id);
        if (it == sessions.end())
            throw Error("invalid_event", "event " + std::to_string(e.seq) + " for unknown session", e.session_id);
        apply(it->second, e);
    }
    return sessions;
}

std::vector<adsim::FunnelStats> funnel_from_sessions(const std::vector<const Session*>& sessions,
                                                     std::optional<Date> from, std::optional<Date> to) {
    std::map<Date, adsim::FunnelStats> by_day;
    for (const auto* s : sessions) {
        const Date d = day_of(s->created_at);
        if ((from && d < *from) || (to && d > *to)) continue;
        auto& f = by_day[d];
        ++f.clicks;
        f.starts += s->started;
        f.completions += s->result.has_value();
        f.conversions += s->conversion_emitted;
    }
    if (by_day.empty() && !(from && to)) return {};
    const Date first = from ? *from : by_day.begin()->first;
    const Date last = to ? *to : by_day.rbegin()->first;
    std::vector<adsim::FunnelStats> out;
    int index = 0;
    for (Date d = first; d <= last; d += std::chrono::days{1}) {
        adsim::FunnelStats f;
        if (auto it = by_day.find(d); it != by_day.end()) f = it->second;
        f.day = index++;
        f.date = d;
        f.impressions = f.clicks;
        out.push_back(f);
    }
    return out;
}

std::vector<adsim::FunnelStats> funnel_from_events(const std::vector<SessionEvent>& events, std::optional<Date> from,
                                                   std::optional<Date> to) {
    const auto sessions = replay(events);
    std::vector<const Session*> ptrs;
    ptrs.reserve(sessions.size());
    for (const auto& [id, s] : sessions) ptrs.push_back(&s);
    return funnel_from_sessions(ptrs, from, to);
}

} // namespace adscreen::service
