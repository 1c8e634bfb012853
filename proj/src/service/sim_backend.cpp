#include "adscreen/service/sim_backend.hpp"

#include "adscreen/rules/json.hpp"

namespace adscreen::service {

using nlohmann::json;

adsim::VisitOutcome ServiceFunnelBackend::visit(const adsim::Visit& v) {
    using namespace std::chrono_literals;
    clock_.set(v.click_time);
    const auto id = service_.create_session(
        {std::string(to_string(v.cancer)), v.campaign_id, v.creative_id, v.query_term, std::nullopt});
    session_ids_.push_back(id);

    adsim::VisitOutcome out;
    if (!v.starts) {
        if (v.declines_pre) service_.record_consent(id, ConsentStage::pre, false);
        return out;
    }
    clock_.advance(20s);
    service_.record_consent(id, ConsentStage::pre, true);

    const auto& questions = service_.config().questionnaires.at(v.cancer).questions;
    json answers = json::object();
    const std::size_t n = v.completes ? questions.size() : std::max<std::size_t>(1, v.partial_answers);
    for (std::size_t k = 0; k < n && k < questions.size(); ++k)
        answers[questions[k].id] = rules::answer_to_json(v.answers.at(questions[k].id));
    json body{{"answers", answers}};
    if (v.completes) {
        body["age"] = v.age;
        body["sex"] = to_string(v.sex);
    }
    clock_.advance(90s);
    const auto session = service_.submit_answers(id, body);
    out.started = session.started;
    if (!session.result) return out;

    out.completed = true;
    clock_.advance(5s);
    out.scs = service_.get_result(id).scs;
    clock_.advance(10s);
    service_.record_consent(id, ConsentStage::post, v.consents_post);
    out.converted = ads_.received(id);
    return out;
}

void ServiceFunnelBackend::end_day(int, Date date) {
    clock_.set(Timestamp{date + std::chrono::days{1}});
    service_.expire_idle();
}

} // namespace adscreen::service
