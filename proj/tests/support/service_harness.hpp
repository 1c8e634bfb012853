#pragma once

#include "adscreen/adsim/campaign.hpp"
#include "adscreen/service/service.hpp"

#include "support/paths.hpp"

#include <memory>

namespace adscreen::testing {

inline const adsim::QuestionnaireSet& shipped_questionnaires() {
    static const auto qs = adsim::load_questionnaires(ruleset_dir());
    return qs;
}

// A service wired to an in-memory (or file) log, a loopback ad client, a
// manual clock and deterministic tokens.
struct ServiceHarness {
    std::unique_ptr<service::EventLog> log;
    service::LoopbackAdClient ads;
    service::ManualClock clock{parse_rfc3339("2018-05-16T09:00:00Z")};
    service::SeededTokenSource tokens;
    std::unique_ptr<service::ScreeningService> svc;

    explicit ServiceHarness(std::optional<std::filesystem::path> log_path = {}, std::uint64_t token_seed = 7)
        : log(log_path ? std::make_unique<service::EventLog>(*log_path) : std::make_unique<service::EventLog>()),
          tokens(token_seed) {
        service::ServiceConfig cfg;
        cfg.questionnaires = shipped_questionnaires();
        svc = std::make_unique<service::ScreeningService>(cfg, *log, ads, clock, tokens);
    }

    std::string click(const std::string& cancer = "breast", const std::string& query = "breast cancer symptoms") {
        return svc->create_session({cancer, "screening", "creative-1", query, std::nullopt});
    }
};

// Breast answers: a lump at 45 scores HIGH, nothing at all scores LOW.
inline nlohmann::json breast_high() {
    return {{"answers",
             {{"breast_lump", true},
              {"nipple_discharge", false},
              {"nipple_retraction", false},
              {"skin_changes", false},
              {"lump_location", "breast"}}},
            {"age", 45},
            {"sex", "female"}};
}

inline nlohmann::json breast_low() {
    return {{"answers",
             {{"breast_lump", false},
              {"nipple_discharge", false},
              {"nipple_retraction", false},
              {"skin_changes", false},
              {"lump_location", "none"}}},
            {"age", 45},
            {"sex", "female"}};
}

} // namespace adscreen::testing
