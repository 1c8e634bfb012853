#pragma once

#include "adscreen/service/service.hpp"

#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <thread>

namespace httplib {
class Server;
}

namespace adscreen::service {

// JSON API under /v1 on top of a ScreeningService:
//   POST /v1/sessions                     {cancer_type, campaign_id, creative_id, query_term?|keyword_id?}
//   GET  /v1/sessions/{id}
//   POST /v1/sessions/{id}/consent        {stage: "pre"|"post", granted}
//   GET  /v1/sessions/{id}/questionnaire
//   POST /v1/sessions/{id}/answers        {answers?, age?, sex?}
//   GET  /v1/sessions/{id}/result
//   GET  /v1/metrics/funnel?from=YYYY-MM-DD&to=YYYY-MM-DD
//   GET  /v1/health
// Errors are {"code", "message", "detail"} with 400/404/409/422 (500 for
// anything unexpected).
class HttpServer {
public:
    explicit HttpServer(ScreeningService& service, std::optional<std::filesystem::path> static_dir = {});
    ~HttpServer();

    HttpServer(const HttpServer&) = delete;
    HttpServer& operator=(const HttpServer&) = delete;

    // Binds without serving. Port 0 picks a free port. Returns the bound port.
    int bind(const std::string& host, int port);
    // Blocks until stop().
    void serve();
    // bind() + serve() on a background thread.
    int start(const std::string& host, int port);
    void stop();

private:
    void routes();

    ScreeningService& service_;
    std::unique_ptr<httplib::Server> server_;
    std::thread thread_;
};

nlohmann::json funnel_to_json(const std::vector<adsim::FunnelStats>& days);

// Settings for `adscreen serve`, read from ADSCREEN_LISTEN (host:port),
// ADSCREEN_RULESET_DIR, ADSCREEN_EVENT_LOG, ADSCREEN_AD_CLIENT
// ("none" | "record:<path>") and ADSCREEN_STATIC_DIR. `env` looks a name up
// and returns nullopt when unset.
struct ServeOptions {
    std::string host = "127.0.0.1";
    int port = 8080;
    std::filesystem::path ruleset_dir = "rulesets";
    std::filesystem::path event_log = "events.jsonl";
    std::string ad_client = "none";
    std::optional<std::filesystem::path> static_dir;
};

ServeOptions serve_options_from_env(const std::function<std::optional<std::string>(const std::string&)>& env,
                                    ServeOptions defaults = {});

// host:port, [v6]:port or a bare port. Throws ValidationError.
std::pair<std::string, int> parse_listen(const std::string& text);

std::unique_ptr<AdPlatformClient> make_ad_client(const std::string& spec);

} // namespace adscreen::service
