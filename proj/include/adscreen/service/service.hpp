#pragma once

#include "adscreen/adsim/campaign.hpp"
#include "adscreen/service/ad_client.hpp"
#include "adscreen/service/event_log.hpp"
#include "adscreen/service/session.hpp"

#include <atomic>
#include <chrono>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <unordered_map>

namespace adscreen::service {

// Error with the HTTP status it maps to.
class ServiceError : public Error {
public:
    ServiceError(int status, std::string code, const std::string& message, std::string subject = {})
        : Error(std::move(code), message, std::move(subject)), status_(status) {}
    int status() const noexcept { return status_; }

private:
    int status_;
};

class Clock {
public:
    virtual ~Clock() = default;
    virtual Timestamp now() const = 0;
};

class SystemClock final : public Clock {
public:
    Timestamp now() const override {
        return std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now());
    }
};

class ManualClock final : public Clock {
public:
    explicit ManualClock(Timestamp start = {}) : t_(start.time_since_epoch().count()) {}
    Timestamp now() const override { return Timestamp{std::chrono::seconds{t_.load()}}; }
    void set(Timestamp t) { t_ = t.time_since_epoch().count(); }
    void advance(std::chrono::seconds d) { t_ += d.count(); }

private:
    std::atomic<std::int64_t> t_;
};

class TokenSource {
public:
    virtual ~TokenSource() = default;
    virtual std::string next() = 0; // 32 lowercase hex digits
};

class RandomTokenSource final : public TokenSource {
public:
    std::string next() override;

private:
    std::mutex mutex_;
};

// Deterministic tokens for tests and simulation runs.
class SeededTokenSource final : public TokenSource {
public:
    explicit SeededTokenSource(std::uint64_t seed) : rng_(seed) {}
    std::string next() override;

private:
    std::mutex mutex_;
    Rng rng_;
};

struct ServiceConfig {
    adsim::QuestionnaireSet questionnaires;
    adsim::Campaign campaign = adsim::make_default_campaign();
    rules::AdviceText advice;
    std::chrono::seconds idle_timeout = std::chrono::hours{24};
    int dispatch_attempts = 3;
};

struct ClickInfo {
    std::string cancer_type;
    std::string campaign_id;
    std::string creative_id;
    std::optional<std::string> query_term; // reduced to a keyword id, never stored
    std::optional<std::string> keyword_id;
};

enum class ConsentStage { pre, post };

struct ResultView {
    Scs scs = Scs::low;
    std::string advice;
    std::vector<std::string> fired_rules;
    bool excluded_from_study = false;
    SessionState state = SessionState::completed;
};

class ScreeningService {
public:
    // Replays whatever `log` already holds.
    ScreeningService(ServiceConfig config, EventLog& log, AdPlatformClient& ads, const Clock& clock,
                     TokenSource& tokens);

    std::string create_session(const ClickInfo& click);
    Session record_consent(const std::string& id, ConsentStage stage, bool granted);
    // Questions of the session's questionnaire, without rule content.
    nlohmann::json questionnaire(const std::string& id);
    // body: {"answers": {...}, "age": int, "sex": "female"|"male"|"unspecified"}; every
    // key optional but at least one required. Validated as a whole before any
    // state changes. Completes the session once every question a rule depends
    // on and the age are known.
    Session submit_answers(const std::string& id, const nlohmann::json& body);
    ResultView get_result(const std::string& id);

    std::optional<Session> find(const std::string& id) const;
    std::size_t session_count() const;

    // Consistent with a prefix of the event log.
    std::vector<adsim::FunnelStats> funnel(std::optional<Date> from = {}, std::optional<Date> to = {}) const;

    // Closes sessions idle for at least the configured timeout. Returns how
    // many were closed.
    std::size_t expire_idle();

    // Conversions that could not be delivered after all attempts.
    std::size_t undelivered_conversions() const { return undelivered_.load(); }

    const ServiceConfig& config() const { return config_; }

private:
    struct Entry {
        std::mutex mutex;
        Session session;
    };

    Entry& entry(const std::string& id) const;
    void record(Entry& e, EventKind kind, nlohmann::json payload);
    void dispatch_conversion(const Session& s);
    const rules::Questionnaire& questionnaire_for(CancerType c) const;

    ServiceConfig config_;
    EventLog& log_;
    AdPlatformClient& ads_;
    const Clock& clock_;
    TokenSource& tokens_;
    mutable std::shared_mutex map_mutex_;
    std::unordered_map<std::string, std::unique_ptr<Entry>> sessions_;
    std::atomic<std::size_t> undelivered_{0};
};

nlohmann::json to_json(const Session& s);
nlohmann::json to_json(const ResultView& r);

} // namespace adscreen::service
