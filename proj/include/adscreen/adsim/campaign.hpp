#pragma once

#include "adscreen/common/rng.hpp"
#include "adscreen/common/types.hpp"
#include "adscreen/rules/questionnaire.hpp"

#include <map>
#include <string>
#include <vector>

namespace adscreen::adsim {

struct TriggerKeyword {
    std::string id;
    CancerType cancer;
    std::string text;
};

struct Creative {
    std::string id;
    CancerType cancer;
    std::string title;
    double ctr_multiplier = 1.0;
};

struct Campaign {
    std::string campaign_id = "screening";
    std::vector<TriggerKeyword> keywords;
    std::vector<Creative> creatives;

    // Uniform over the cancer's keywords / creatives (equal-probability rotation).
    const TriggerKeyword& pick_keyword(CancerType c, Rng& rng) const;
    const Creative& pick_creative(CancerType c, Rng& rng) const;
    // "other" when the text is not one of the trigger keywords.
    std::string keyword_id_for(std::string_view query_text) const;
};

// Five query templates and three ad titles per cancer type.
Campaign make_default_campaign();

using QuestionnaireSet = std::map<CancerType, rules::Questionnaire>;

// Loads <dir>/<cancer>.sample for every cancer type.
QuestionnaireSet load_questionnaires(const std::filesystem::path& dir);

// Synthetic answers to every question. A latent-high user picks one rule
// that admits their age and sex and answers its predicates positively with
// probability `p_rule`; every other boolean is true with probability
// `p_background`, as are all booleans of latent-low users. Non-boolean
// questions outside the target rule take their first option (or range
// minimum) except with probability `p_background`.
struct AnswerModel {
    double p_rule = 0.9;
    double p_background = 0.05;
};

std::map<std::string, rules::AnswerValue> synthesize_answers(const rules::Questionnaire& q, bool latent_high,
                                                             int age, Sex sex, const AnswerModel& model, Rng& rng);

} // namespace adscreen::adsim
