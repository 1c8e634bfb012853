#include "adscreen/service/session.hpp"

#include "adscreen/common/error.hpp"
#include "adscreen/rules/json.hpp"

#include <fmt/format.h>


namespace adscreen::service {

using nlohmann::json;

std::string_view to_string(SessionState s) {
    switch (s) {
    case SessionState::created: return "created";
    case SessionState::consented_pre: return "consented_pre";
    case SessionState::in_progress: return "in_progress";
    case SessionState::completed: return "completed";
    case SessionState::consented_post: return "consented_post";
    case SessionState::closed: return "closed";
    }
    return "?";
}

namespace {

constexpr std::array<EventKind, 8> all_kinds{EventKind::click,        EventKind::consent_pre,
                                             EventKind::answer,       EventKind::complete,
                                             EventKind::consent_post, EventKind::conversion_emitted,
                                             EventKind::advice_shown, EventKind::closed};

[[noreturn]] void bad_event(const SessionEvent& e, const std::string& why) {
    throw Error("invalid_event", fmt::format("event {} ({}) for session {}: {}", e.seq, to_string(e.kind), e.session_id, why),
                e.session_id);
}

void move_to(Session& s, SessionState to, const SessionEvent& e) {
    if (s.state == to) return;
    if (!legal_transition(s.state, to))
        bad_event(e, fmt::format("illegal transition {} -> {}", to_string(s.state), to_string(to)));
    s.state = to;
}

} // namespace

std::string_view to_string(EventKind k) {
    switch (k) {
    case EventKind::click: return "click";
    case EventKind::consent_pre: return "consent_pre";
    case EventKind::answer: return "answer";
    case EventKind::complete: return "complete";
    case EventKind::consent_post: return "consent_post";
    case EventKind::conversion_emitted: return "conversion_emitted";
    case EventKind::advice_shown: return "advice_shown";
    case EventKind::closed: return "closed";
    }
    return "?";
}

std::optional<EventKind> parse_event_kind(std::string_view text) {
    for (auto k : all_kinds)
        if (to_string(k) == text) return k;
    return std::nullopt;
}

json to_json(const SessionEvent& e) {
    return {{"seq", e.seq},
            {"session_id", e.session_id},
            {"kind", to_string(e.kind)},
            {"ts", format_rfc3339(e.ts)},
            {"payload", e.payload}};
}

SessionEvent event_from_json(const json& j) {
    SessionEvent e;
    e.seq = j.at("seq").get<std::int64_t>();
    e.session_id = j.at("session_id").get<std::string>();
    const auto kind = parse_event_kind(j.at("kind").get<std::string>());
    if (!kind) throw ParseError("unknown event kind " + j.at("kind").dump());
    e.kind = *kind;
    e.ts = parse_rfc3339(j.at("ts").get<std::string>());
    e.payload = j.at("payload");
    return e;
}

bool legal_transition(SessionState from, SessionState to) {
    if (from == SessionState::closed) return false;
    if (to == SessionState::closed) return true;
    return static_cast<int>(to) == static_cast<int>(from) + 1 ||
           (from == SessionState::consented_pre && to == SessionState::completed);
}

void apply(Session& s, const SessionEvent& e) {
    if (e.kind != EventKind::click && e.seq <= s.last_seq) bad_event(e, "sequence number did not increase");
    const json& p = e.payload;
    try {
        switch (e.kind) {
        case EventKind::click: {
            if (!s.id.empty()) bad_event(e, "session already exists");
            s = Session{};
            s.id = e.session_id;
            const auto cancer = parse_cancer_type(p.at("cancer_type").get<std::string>());
            if (!cancer) bad_event(e, "unknown cancer type");
            s.cancer = *cancer;
            s.meta = {p.at("campaign_id").get<std::string>(), p.at("creative_id").get<std::string>(),
                      p.at("keyword_id").get<std::string>()};
            s.created_at = e.ts;
            break;
        }
        case EventKind::consent_pre:
            if (s.state != SessionState::created) bad_event(e, "pre-consent outside the created state");
            if (p.at("granted").get<bool>()) {
                move_to(s, SessionState::consented_pre, e);
            } else {
                s.excluded_from_study = true;
                move_to(s, SessionState::closed, e);
            }
            break;
        case EventKind::answer: {
            if (s.state != SessionState::consented_pre && s.state != SessionState::in_progress)
                bad_event(e, "answers outside the questionnaire stages");
            for (const auto& [qid, v] : p.at("answers").items()) {
                if (v.is_boolean()) s.answers[qid] = v.get<bool>();
                else if (v.is_number_integer()) s.answers[qid] = v.get<std::int64_t>();
                else s.answers[qid] = v.get<std::string>();
            }
            if (p.contains("age")) s.age = p["age"].get<int>();
            if (p.contains("sex")) {
                const auto sex = parse_sex(p["sex"].get<std::string>());
                if (!sex) bad_event(e, "unknown sex");
                s.sex = *sex;
            }
            s.started = true;
            move_to(s, SessionState::in_progress, e);
            break;
        }
        case EventKind::complete: {
            if (s.state != SessionState::in_progress) bad_event(e, "completion outside in_progress");
            rules::SCSResult r;
            const auto scs = parse_scs(p.at("scs").get<std::string>());
            if (!scs) bad_event(e, "unknown score");
            r.scs = *scs;
            r.fired_rules = p.at("fired_rules").get<std::vector<std::string>>();
            s.result = std::move(r);
            move_to(s, SessionState::completed, e);
            break;
        }
        case EventKind::consent_post:
            if (s.state != SessionState::completed) bad_event(e, "post-consent outside the completed state");
            if (p.at("granted").get<bool>()) {
                move_to(s, SessionState::consented_post, e);
            } else {
                s.excluded_from_study = true;
                move_to(s, SessionState::closed, e);
            }
            break;
        case EventKind::conversion_emitted:
            if (s.conversion_emitted) bad_event(e, "second conversion");
            if (s.state != SessionState::consented_post || !s.result || s.result->scs != Scs::high)
                bad_event(e, "conversion without a consented HIGH result");
            s.conversion_emitted = true;
            break;
        case EventKind::advice_shown:
            if (!s.result) bad_event(e, "advice before a result");
            s.advice_shown = true;
            break;
        case EventKind::closed:
            move_to(s, SessionState::closed, e);
            break;
        }
    } catch (const json::exception& ex) {
        bad_event(e, std::string("malformed payload: ") + ex.what());
    }
    s.updated_at = e.ts;
    s.last_seq = e.seq;
}

} // namespace adscreen::service
