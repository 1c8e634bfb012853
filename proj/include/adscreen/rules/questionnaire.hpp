#pragma once

#include "adscreen/common/error.hpp"
#include "adscreen/common/types.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace adscreen::rules {

enum class QuestionKind { boolean, integer_range, choice };

std::string_view to_string(QuestionKind kind);

using AnswerValue = std::variant<bool, std::int64_t, std::string>;

std::string describe(const AnswerValue& value);

struct Question {
    std::string id;
    std::string prompt;
    QuestionKind kind = QuestionKind::boolean;
    std::int64_t min = 0; // integer_range only, inclusive
    std::int64_t max = 0;
    std::vector<std::string> options; // choice only

    bool accepts(const AnswerValue& value) const;
};

// A single "symptom present" condition on one question. Only positive
// conditions are expressible; there is no negation.
struct Predicate {
    enum class Op { is_true, equals, at_least, at_most, one_of };

    std::string question_id;
    Op op = Op::is_true;
    std::int64_t number = 0;          // equals / at_least / at_most
    std::vector<std::string> options; // one_of

    bool holds(const AnswerValue& value) const;
};

enum class SexGate { any, female, male };

struct ReferralRule {
    std::string id;
    std::vector<Predicate> all_of;
    std::vector<Predicate> any_of;
    std::optional<int> min_age;
    std::optional<int> max_age;
    SexGate sex = SexGate::any;

    bool admits(int age, Sex sex) const;
};

struct Questionnaire {
    CancerType cancer_type = CancerType::breast;
    std::string version;
    std::vector<Question> questions;
    std::vector<ReferralRule> rules; // no rule fires -> LOW

    const Question* find(std::string_view question_id) const;

    // Ids of every question some rule depends on.
    std::set<std::string> referenced_questions() const;
};

inline constexpr int max_age_years = 130;

struct Response {
    std::string questionnaire_version;
    std::map<std::string, AnswerValue> answers;
    int age = 0;
    Sex sex = Sex::unspecified;
};

struct SCSResult {
    Scs scs = Scs::low;
    std::vector<std::string> fired_rules;
    std::string advice;

    friend bool operator==(const SCSResult&, const SCSResult&) = default;
};

struct AdviceText {
    std::string high =
        "Your answers match symptoms that doctors take seriously. Please consult a doctor "
        "immediately.";
    std::string low =
        "Your symptoms are not commonly associated with cancer. However, if your symptoms are "
        "persistent or worrying, please see a medical doctor.";

    const std::string& for_score(Scs scs) const { return scs == Scs::high ? high : low; }
};

// Thrown by score() when a response does not fit the questionnaire.
class ScoringError : public Error {
public:
    ScoringError(std::string code, const std::string& message, std::string subject = {})
        : Error(std::move(code), message, std::move(subject)) {}
};

// Parses and validates a ruleset document (JSON, strict keys).
// Throws ParseError for malformed syntax and ValidationError naming the
// offending id for schema or invariant violations.
Questionnaire load_ruleset(std::string_view document);
Questionnaire load_ruleset_file(const std::filesystem::path& path);

// Checks every invariant of an already-built questionnaire.
void validate(const Questionnaire& q);

// Rejects answers outside their question's domain, unknown question ids and
// ages outside [0, 130]. Missing answers are not checked here.
void validate_answers(const Questionnaire& q, const Response& r);

SCSResult score(const Questionnaire& q, const Response& r, const AdviceText& advice = {});

} // namespace adscreen::rules
