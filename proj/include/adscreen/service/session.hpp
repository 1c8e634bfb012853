#pragma once

#include "adscreen/adsim/funnel.hpp"
#include "adscreen/common/time.hpp"
#include "adscreen/rules/questionnaire.hpp"

#include <json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace adscreen::service {

enum class SessionState { created, consented_pre, in_progress, completed, consented_post, closed };

std::string_view to_string(SessionState s);

// `closed` records expiry; consent denials close the session through their
// own consent event.
enum class EventKind { click, consent_pre, answer, complete, consent_post, conversion_emitted, advice_shown, closed };

std::string_view to_string(EventKind k);
std::optional<EventKind> parse_event_kind(std::string_view text);

// What the ad click carried. The raw query is reduced to the id of the
// trigger keyword it matched ("other" otherwise) before it reaches the log.
struct CampaignMeta {
    std::string campaign_id;
    std::string creative_id;
    std::string keyword_id;
};

struct SessionEvent {
    std::int64_t seq = 0;
    std::string session_id;
    EventKind kind = EventKind::click;
    nlohmann::json payload = nlohmann::json::object();
    Timestamp ts;
};

nlohmann::json to_json(const SessionEvent& e);
SessionEvent event_from_json(const nlohmann::json& j);

struct Session {
    std::string id;
    CancerType cancer = CancerType::breast;
    CampaignMeta meta;
    SessionState state = SessionState::created;
    std::map<std::string, rules::AnswerValue> answers;
    std::optional<int> age;
    Sex sex = Sex::unspecified;
    std::optional<rules::SCSResult> result; // advice text filled in by the service
    bool started = false;                   // at least one accepted answer submission
    bool excluded_from_study = false;
    bool conversion_emitted = false;
    bool advice_shown = false;
    Timestamp created_at;
    Timestamp updated_at;
    std::int64_t last_seq = 0;
};

// Legal successor states (closure is legal from anywhere but `closed`).
bool legal_transition(SessionState from, SessionState to);

// Folds one event into a session. The same function drives live requests and
// replay, so a restarted service reproduces its sessions exactly. A click
// event initializes `s`. Throws Error("invalid_event") when the event does not
// fit the session.
void apply(Session& s, const SessionEvent& e);

// Folds a whole log. Throws Error("invalid_event") on an event for an unknown
// session or one apply() rejects.
std::map<std::string, Session> replay(const std::vector<SessionEvent>& events);

// Per-day funnel over sessions grouped by click date. Impressions are not
// observable by the service and are reported equal to clicks.
std::vector<adsim::FunnelStats> funnel_from_sessions(const std::vector<const Session*>& sessions,
                                                     std::optional<Date> from, std::optional<Date> to);

std::vector<adsim::FunnelStats> funnel_from_events(const std::vector<SessionEvent>& events, std::optional<Date> from,
                                                   std::optional<Date> to);

} // namespace adscreen::service
