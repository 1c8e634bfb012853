#include "adscreen/service/service.hpp"

#include "adscreen/rules/json.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <iostream>
#include <random>

namespace adscreen::service {

using nlohmann::json;

namespace {

std::string hex128(std::uint64_t hi, std::uint64_t lo) { return fmt::format("{:016x}{:016x}", hi, lo); }

ServiceError wrong_stage(const Session& s, const std::string& action) {
    if (s.state == SessionState::closed)
        return ServiceError(409, "session_closed", "session is closed", s.id);
    return ServiceError(409, "wrong_stage", fmt::format("cannot {} in state {}", action, to_string(s.state)), s.id);
}

} // namespace

std::string RandomTokenSource::next() {
    std::lock_guard lock(mutex_);
    std::random_device rd;
    auto word = [&] { return (static_cast<std::uint64_t>(rd()) << 32) | rd(); };
    const auto hi = word();
    return hex128(hi, word());
}

std::string SeededTokenSource::next() {
    std::lock_guard lock(mutex_);
    const auto hi = rng_();
    return hex128(hi, rng_());
}

ScreeningService::ScreeningService(ServiceConfig config, EventLog& log, AdPlatformClient& ads, const Clock& clock,
                                   TokenSource& tokens)
    : config_(std::move(config)), log_(log), ads_(ads), clock_(clock), tokens_(tokens) {
    for (auto& [id, s] : replay(log_.snapshot())) {
        auto e = std::make_unique<Entry>();
        e->session = std::move(s);
        sessions_.emplace(id, std::move(e));
    }
}

const rules::Questionnaire& ScreeningService::questionnaire_for(CancerType c) const {
    auto it = config_.questionnaires.find(c);
    if (it == config_.questionnaires.end())
        throw ServiceError(422, "unknown_cancer_type", fmt::format("no questionnaire for {}", to_string(c)),
                           std::string(to_string(c)));
    return it->second;
}

ScreeningService::Entry& ScreeningService::entry(const std::string& id) const {
    std::shared_lock lock(map_mutex_);
    auto it = sessions_.find(id);
    if (it == sessions_.end()) throw ServiceError(404, "unknown_session", "no such session", id);
    return *it->second;
}

void ScreeningService::record(Entry& e, EventKind kind, json payload) {
    const auto ev = log_.append(e.session.id, kind, std::move(payload), clock_.now());
    apply(e.session, ev);
}

std::string ScreeningService::create_session(const ClickInfo& click) {
    const auto cancer = parse_cancer_type(click.cancer_type);
    if (!cancer) throw ServiceError(422, "unknown_cancer_type", "unknown cancer type", click.cancer_type);
    questionnaire_for(*cancer);
    if (click.campaign_id.empty() || click.creative_id.empty())
        throw ServiceError(400, "invalid_request", "campaign_id and creative_id are required");

    std::string keyword = "other";
    if (click.keyword_id) {
        const auto& kws = config_.campaign.keywords;
        const bool known = *click.keyword_id == "other" ||
                           std::any_of(kws.begin(), kws.end(), [&](const auto& k) { return k.id == *click.keyword_id; });
        if (!known) throw ServiceError(422, "unknown_keyword", "unknown keyword id", *click.keyword_id);
        keyword = *click.keyword_id;
    } else if (click.query_term) {
        keyword = config_.campaign.keyword_id_for(*click.query_term);
    }

    auto e = std::make_unique<Entry>();
    std::unique_lock lock(map_mutex_);
    std::string id;
    do id = tokens_.next();
    while (sessions_.count(id));
    const auto ev = log_.append(id, EventKind::click,
                                {{"cancer_type", to_string(*cancer)},
                                 {"campaign_id", click.campaign_id},
                                 {"creative_id", click.creative_id},
                                 {"keyword_id", keyword}},
                                clock_.now());
    apply(e->session, ev);
    sessions_.emplace(id, std::move(e));
    return id;
}

Session ScreeningService::record_consent(const std::string& id, ConsentStage stage, bool granted) {
    Entry& e = entry(id);
    std::lock_guard lock(e.mutex);
    Session& s = e.session;
    if (stage == ConsentStage::pre) {
        if (s.state != SessionState::created) throw wrong_stage(s, "record pre-questionnaire consent");
        record(e, EventKind::consent_pre, {{"granted", granted}});
        return s;
    }
    if (s.state != SessionState::completed) throw wrong_stage(s, "record post-questionnaire consent");
    record(e, EventKind::consent_post, {{"granted", granted}});
    if (granted && s.result && s.result->scs == Scs::high) {
        record(e, EventKind::conversion_emitted, json::object());
        dispatch_conversion(s);
    }
    return s;
}

void ScreeningService::dispatch_conversion(const Session& s) {
    const ConversionSignal signal{s.id, s.cancer, s.meta, s.updated_at};
    for (int attempt = 0; attempt < std::max(1, config_.dispatch_attempts); ++attempt) {
        try {
            ads_.send(signal);
            return;
        } catch (const std::exception& ex) {
            std::cerr << json{{"level", "warn"}, {"event", "conversion_dispatch_failed"}, {"session_id", s.id},
                              {"attempt", attempt + 1}, {"message", ex.what()}}
                             .dump()
                      << '\n';
        }
    }
    ++undelivered_;
}

json ScreeningService::questionnaire(const std::string& id) {
    Entry& e = entry(id);
    std::lock_guard lock(e.mutex);
    const Session& s = e.session;
    if (s.state == SessionState::created || s.state == SessionState::closed)
        throw wrong_stage(s, "show the questionnaire");
    const auto& q = questionnaire_for(s.cancer);
    json out{{"session_id", s.id},
             {"cancer_type", to_string(s.cancer)},
             {"version", q.version},
             {"questions", rules::questions_to_json(q)}};
    out["state"] = to_string(s.state);
    json answered = json::object();
    for (const auto& [qid, v] : s.answers) answered[qid] = rules::answer_to_json(v);
    out["answers"] = answered;
    return out;
}

Session ScreeningService::submit_answers(const std::string& id, const json& body) {
    if (!body.is_object()) throw ServiceError(400, "invalid_request", "body must be a JSON object");
    for (const auto& [key, v] : body.items())
        if (key != "answers" && key != "age" && key != "sex")
            throw ServiceError(400, "invalid_request", "unknown field '" + key + "'", key);
    if (body.empty()) throw ServiceError(400, "invalid_request", "nothing to submit");

    Entry& e = entry(id);
    std::lock_guard lock(e.mutex);
    Session& s = e.session;
    if (s.state != SessionState::consented_pre && s.state != SessionState::in_progress)
        throw wrong_stage(s, "accept answers");
    const auto& q = questionnaire_for(s.cancer);

    json payload{{"answers", json::object()}};
    if (auto it = body.find("answers"); it != body.end()) {
        if (!it->is_object()) throw ServiceError(400, "invalid_request", "'answers' must be an object", "answers");
        for (const auto& [qid, v] : it->items()) {
            const auto* question = q.find(qid);
            if (!question) throw ServiceError(422, "unknown_question", "unknown question '" + qid + "'", qid);
            try {
                payload["answers"][qid] = rules::answer_to_json(rules::answer_from_json(*question, v));
            } catch (const rules::ScoringError& ex) {
                throw ServiceError(422, ex.code(), ex.what(), ex.subject());
            }
        }
    }
    if (auto it = body.find("age"); it != body.end()) {
        if (!it->is_number_integer() || it->get<long long>() < 0 || it->get<long long>() > rules::max_age_years)
            throw ServiceError(422, "domain_violation", "age must be an integer in [0, 130]", "age");
        payload["age"] = it->get<int>();
    }
    if (auto it = body.find("sex"); it != body.end()) {
        if (!it->is_string() || !parse_sex(it->get<std::string>()))
            throw ServiceError(422, "domain_violation", "sex must be female, male or unspecified", "sex");
        payload["sex"] = *it;
    }
    record(e, EventKind::answer, std::move(payload));

    if (!s.age) return s;
    for (const auto& qid : q.referenced_questions())
        if (!s.answers.count(qid)) return s;
    rules::Response r{q.version, s.answers, *s.age, s.sex};
    const auto result = rules::score(q, r, config_.advice);
    record(e, EventKind::complete, {{"scs", to_string(result.scs)}, {"fired_rules", result.fired_rules}});
    return s;
}

ResultView ScreeningService::get_result(const std::string& id) {
    Entry& e = entry(id);
    std::lock_guard lock(e.mutex);
    const Session& s = e.session;
    if (!s.result) {
        if (s.state == SessionState::closed) throw ServiceError(409, "session_closed", "session is closed", s.id);
        throw ServiceError(409, "not_ready", "questionnaire not complete", s.id);
    }
    if (!s.advice_shown) record(e, EventKind::advice_shown, json::object());
    return {s.result->scs, config_.advice.for_score(s.result->scs), s.result->fired_rules, s.excluded_from_study,
            s.state};
}

std::optional<Session> ScreeningService::find(const std::string& id) const {
    std::shared_lock map_lock(map_mutex_);
    auto it = sessions_.find(id);
    if (it == sessions_.end()) return std::nullopt;
    std::lock_guard lock(it->second->mutex);
    return it->second->session;
}

std::size_t ScreeningService::session_count() const {
    std::shared_lock lock(map_mutex_);
    return sessions_.size();
}

std::vector<adsim::FunnelStats> ScreeningService::funnel(std::optional<Date> from, std::optional<Date> to) const {
    return funnel_from_events(log_.snapshot(), from, to);
}

std::size_t ScreeningService::expire_idle() {
    std::vector<Entry*> all;
    {
        std::shared_lock lock(map_mutex_);
        all.reserve(sessions_.size());
        for (auto& [id, e] : sessions_) all.push_back(e.get());
    }
    const auto now = clock_.now();
    std::size_t closed = 0;
    for (Entry* e : all) {
        std::lock_guard lock(e->mutex);
        if (e->session.state == SessionState::closed) continue;
        if (now - e->session.updated_at < config_.idle_timeout) continue;
        record(*e, EventKind::closed, {{"reason", "idle"}});
        ++closed;
    }
    return closed;
}

json to_json(const Session& s) {
    json answers = json::object();
    for (const auto& [qid, v] : s.answers) answers[qid] = rules::answer_to_json(v);
    json out{{"session_id", s.id},
             {"cancer_type", to_string(s.cancer)},
             {"state", to_string(s.state)},
             {"answers", answers},
             {"excluded_from_study", s.excluded_from_study}};
    out["age"] = s.age ? json(*s.age) : json(nullptr);
    out["sex"] = to_string(s.sex);
    out["complete"] = s.result.has_value();
    return out;
}

json to_json(const ResultView& r) {
    return {{"scs", to_string(r.scs)},
            {"advice", r.advice},
            {"fired_rules", r.fired_rules},
            {"excluded_from_study", r.excluded_from_study},
            {"state", to_string(r.state)}};
}

} // namespace adscreen::service
