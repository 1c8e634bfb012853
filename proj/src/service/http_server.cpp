#include "adscreen/service/http.hpp"

#include <httplib.h>

namespace adscreen::service {

using nlohmann::json;

namespace {

void send_json(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& code, const std::string& message,
                const std::string& detail) {
    send_json(res, status, {{"code", code}, {"message", message}, {"detail", detail}});
}

json parse_body(const httplib::Request& req) {
    if (req.body.empty()) return json::object();
    try {
        return json::parse(req.body);
    } catch (const json::parse_error& e) {
        throw ServiceError(400, "invalid_json", std::string("request body is not JSON: ") + e.what());
    }
}

std::string field(const json& body, const char* key, bool required) {
    auto it = body.find(key);
    if (it == body.end() || it->is_null()) {
        if (required) throw ServiceError(400, "invalid_request", std::string("missing field '") + key + "'", key);
        return {};
    }
    if (!it->is_string()) throw ServiceError(400, "invalid_request", std::string("'") + key + "' must be a string", key);
    return it->get<std::string>();
}

template <typename F>
httplib::Server::Handler guarded(F&& f) {
    return [f = std::forward<F>(f)](const httplib::Request& req, httplib::Response& res) {
        try {
            f(req, res);
        } catch (const ServiceError& e) {
            send_error(res, e.status(), e.code(), e.what(), e.subject());
        } catch (const ValidationError& e) {
            send_error(res, 400, e.code(), e.what(), e.subject());
        } catch (const ParseError& e) {
            send_error(res, 400, e.code(), e.what(), e.subject());
        } catch (const std::exception& e) {
            send_error(res, 500, "internal_error", e.what(), "");
        }
    };
}

std::optional<Date> date_param(const httplib::Request& req, const char* name) {
    if (!req.has_param(name)) return std::nullopt;
    return parse_date(req.get_param_value(name));
}

} // namespace

json funnel_to_json(const std::vector<adsim::FunnelStats>& days) {
    json out = json::array();
    for (const auto& d : days)
        out.push_back({{"day", d.day},
                       {"date", d.date ? format_date(*d.date) : ""},
                       {"impressions", d.impressions},
                       {"clicks", d.clicks},
                       {"ctr", d.ctr()},
                       {"starts", d.starts},
                       {"completions", d.completions},
                       {"conversions", d.conversions},
                       {"conversion_rate", d.conversion_rate()},
                       {"conversion_per_completion", d.conversion_per_completion()}});
    return out;
}

HttpServer::HttpServer(ScreeningService& service, std::optional<std::filesystem::path> static_dir)
    : service_(service), server_(std::make_unique<httplib::Server>()) {
    routes();
    // httplib defaults to SO_REUSEPORT, which would let two servers share a
    // port silently.
    server_->set_socket_options([](socket_t sock) {
        int yes = 1;
        setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const void*>(&yes), sizeof(yes));
    });
    if (static_dir && !server_->set_mount_point("/", static_dir->string()))
        throw IoError("static directory does not exist", static_dir->string());
}

HttpServer::~HttpServer() { stop(); }

void HttpServer::routes() {
    auto& s = *server_;
    ScreeningService& svc = service_;
    const std::string id = "([0-9a-f]{32})";

    s.set_default_headers({{"Access-Control-Allow-Origin", "*"}});
    s.Options(R"(/v1/.*)", [](const httplib::Request&, httplib::Response& res) {
        res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
        res.set_header("Access-Control-Allow-Headers", "Content-Type");
        res.status = 204;
    });

    s.Get("/v1/health", guarded([](const httplib::Request&, httplib::Response& res) {
              send_json(res, 200, {{"status", "ok"}});
          }));

    s.Post("/v1/sessions", guarded([&svc](const httplib::Request& req, httplib::Response& res) {
               const json body = parse_body(req);
               if (!body.is_object()) throw ServiceError(400, "invalid_request", "body must be a JSON object");
               ClickInfo click{field(body, "cancer_type", true), field(body, "campaign_id", true),
                               field(body, "creative_id", true), std::nullopt, std::nullopt};
               if (body.contains("query_term")) click.query_term = field(body, "query_term", false);
               if (body.contains("keyword_id")) click.keyword_id = field(body, "keyword_id", false);
               const auto sid = svc.create_session(click);
               send_json(res, 201, to_json(*svc.find(sid)));
           }));

    s.Get("/v1/sessions/" + id, guarded([&svc](const httplib::Request& req, httplib::Response& res) {
              const auto session = svc.find(req.matches[1]);
              if (!session) throw ServiceError(404, "unknown_session", "no such session", req.matches[1]);
              send_json(res, 200, to_json(*session));
          }));

    s.Post("/v1/sessions/" + id + "/consent", guarded([&svc](const httplib::Request& req, httplib::Response& res) {
               const json body = parse_body(req);
               const std::string stage = field(body, "stage", true);
               if (stage != "pre" && stage != "post")
                   throw ServiceError(400, "invalid_request", "stage must be 'pre' or 'post'", "stage");
               auto granted = body.find("granted");
               if (granted == body.end() || !granted->is_boolean())
                   throw ServiceError(400, "invalid_request", "'granted' must be a boolean", "granted");
               const auto session = svc.record_consent(req.matches[1],
                                                       stage == "pre" ? ConsentStage::pre : ConsentStage::post,
                                                       granted->get<bool>());
               send_json(res, 200, to_json(session));
           }));

    s.Get("/v1/sessions/" + id + "/questionnaire",
          guarded([&svc](const httplib::Request& req, httplib::Response& res) {
              send_json(res, 200, svc.questionnaire(req.matches[1]));
          }));

    s.Post("/v1/sessions/" + id + "/answers", guarded([&svc](const httplib::Request& req, httplib::Response& res) {
               send_json(res, 200, to_json(svc.submit_answers(req.matches[1], parse_body(req))));
           }));

    s.Get("/v1/sessions/" + id + "/result", guarded([&svc](const httplib::Request& req, httplib::Response& res) {
              send_json(res, 200, to_json(svc.get_result(req.matches[1])));
          }));

    s.Get("/v1/metrics/funnel", guarded([&svc](const httplib::Request& req, httplib::Response& res) {
              const auto from = date_param(req, "from");
              const auto to = date_param(req, "to");
              if (from && to && *from > *to)
                  throw ServiceError(400, "invalid_request", "'from' is after 'to'", "from");
              send_json(res, 200, {{"days", funnel_to_json(svc.funnel(from, to))}});
          }));

    // Unknown /v1 routes and malformed ids.
    s.set_error_handler([](const httplib::Request&, httplib::Response& res) {
        if (res.status == 404 && res.body.empty())
            send_error(res, 404, "not_found", "no such endpoint", "");
    });
}

int HttpServer::bind(const std::string& host, int port) {
    const int bound = port == 0 ? server_->bind_to_any_port(host) : (server_->bind_to_port(host, port) ? port : -1);
    if (bound < 0) throw IoError("cannot bind " + host + ":" + std::to_string(port), host);
    return bound;
}

void HttpServer::serve() { server_->listen_after_bind(); }

int HttpServer::start(const std::string& host, int port) {
    const int bound = bind(host, port);
    thread_ = std::thread([this] { serve(); });
    server_->wait_until_ready();
    return bound;
}

void HttpServer::stop() {
    server_->stop();
    if (thread_.joinable()) thread_.join();
}

std::pair<std::string, int> parse_listen(const std::string& text) {
    auto port_of = [&](const std::string& p) {
        try {
            std::size_t used = 0;
            const int v = std::stoi(p, &used);
            if (used != p.size() || v < 0 || v > 65535) throw std::out_of_range("port");
            return v;
        } catch (const std::logic_error&) {
            throw ValidationError("bad listen address '" + text + "'", "ADSCREEN_LISTEN");
        }
    };
    const auto colon = text.rfind(':');
    if (colon == std::string::npos) return {"127.0.0.1", port_of(text)};
    std::string host = text.substr(0, colon);
    if (host.size() >= 2 && host.front() == '[' && host.back() == ']') host = host.substr(1, host.size() - 2);
    if (host.empty()) host = "0.0.0.0";
    return {host, port_of(text.substr(colon + 1))};
}

ServeOptions serve_options_from_env(const std::function<std::optional<std::string>(const std::string&)>& env,
                                    ServeOptions opts) {
    if (auto v = env("ADSCREEN_LISTEN")) std::tie(opts.host, opts.port) = parse_listen(*v);
    if (auto v = env("ADSCREEN_RULESET_DIR")) opts.ruleset_dir = *v;
    if (auto v = env("ADSCREEN_EVENT_LOG")) opts.event_log = *v;
    if (auto v = env("ADSCREEN_AD_CLIENT")) opts.ad_client = *v;
    if (auto v = env("ADSCREEN_STATIC_DIR")) opts.static_dir = *v;
    if (opts.ad_client != "none" && !(opts.ad_client.rfind("record:", 0) == 0 && opts.ad_client.size() > 7))
        throw ValidationError("ad client must be 'none' or 'record:<path>'", "ADSCREEN_AD_CLIENT");
    return opts;
}

std::unique_ptr<AdPlatformClient> make_ad_client(const std::string& spec) {
    if (spec == "none") return std::make_unique<NullAdClient>();
    if (spec.rfind("record:", 0) == 0 && spec.size() > 7) return std::make_unique<RecordingAdClient>(spec.substr(7));
    throw ValidationError("ad client must be 'none' or 'record:<path>'", "ADSCREEN_AD_CLIENT");
}

} // namespace adscreen::service
