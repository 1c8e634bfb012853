#pragma once

#include "adscreen/rules/questionnaire.hpp"

#include <json.hpp>

namespace adscreen::rules {

// Display form served to clients: questions only, no rule content.
nlohmann::json questions_to_json(const Questionnaire& q);

// Full ruleset document; load_ruleset(to_document(q).dump()) reproduces q.
nlohmann::json to_document(const Questionnaire& q);

nlohmann::json answer_to_json(const AnswerValue& value);

// Interprets a JSON value as an answer to `question`. Throws ScoringError
// with code "domain_violation" naming the question when the type or value
// is not in the question's domain.
AnswerValue answer_from_json(const Question& question, const nlohmann::json& value);

} // namespace adscreen::rules
