#include "adscreen/rules/questionnaire.hpp"

#include <algorithm>

namespace adscreen::rules {

std::string_view to_string(QuestionKind kind) {
    switch (kind) {
        case QuestionKind::boolean:       return "boolean";
        case QuestionKind::integer_range: return "integer-range";
        case QuestionKind::choice:        return "choice";
    }
    return "unknown";
}

std::string describe(const AnswerValue& value) {
    if (const auto* b = std::get_if<bool>(&value)) return *b ? "true" : "false";
    if (const auto* i = std::get_if<std::int64_t>(&value)) return std::to_string(*i);
    return '"' + std::get<std::string>(value) + '"';
}

bool Question::accepts(const AnswerValue& value) const {
    switch (kind) {
        case QuestionKind::boolean:
            return std::holds_alternative<bool>(value);
        case QuestionKind::integer_range: {
            const auto* v = std::get_if<std::int64_t>(&value);
            return v && *v >= min && *v <= max;
        }
        case QuestionKind::choice: {
            const auto* v = std::get_if<std::string>(&value);
            return v && std::find(options.begin(), options.end(), *v) != options.end();
        }
    }
    return false;
}

bool Predicate::holds(const AnswerValue& value) const {
    switch (op) {
        case Op::is_true: {
            const auto* b = std::get_if<bool>(&value);
            return b && *b;
        }
        case Op::equals: {
            const auto* v = std::get_if<std::int64_t>(&value);
            return v && *v == number;
        }
        case Op::at_least: {
            const auto* v = std::get_if<std::int64_t>(&value);
            return v && *v >= number;
        }
        case Op::at_most: {
            const auto* v = std::get_if<std::int64_t>(&value);
            return v && *v <= number;
        }
        case Op::one_of: {
            const auto* v = std::get_if<std::string>(&value);
            return v && std::find(options.begin(), options.end(), *v) != options.end();
        }
    }
    return false;
}

bool ReferralRule::admits(int age, Sex respondent) const {
    if (min_age && age < *min_age) return false;
    if (max_age && age > *max_age) return false;
    switch (sex) {
        case SexGate::any:    return true;
        case SexGate::female: return respondent == Sex::female;
        case SexGate::male:   return respondent == Sex::male;
    }
    return false;
}

const Question* Questionnaire::find(std::string_view question_id) const {
    for (const auto& q : questions)
        if (q.id == question_id) return &q;
    return nullptr;
}

std::set<std::string> Questionnaire::referenced_questions() const {
    std::set<std::string> ids;
    for (const auto& rule : rules) {
        for (const auto& p : rule.all_of) ids.insert(p.question_id);
        for (const auto& p : rule.any_of) ids.insert(p.question_id);
    }
    return ids;
}

namespace {

void validate_predicate(const Questionnaire& q, const ReferralRule& rule, const Predicate& p) {
    const Question* question = q.find(p.question_id);
    if (!question)
        throw ValidationError("rule '" + rule.id + "' references unknown question '" +
                                  p.question_id + "'",
                              p.question_id);
    using Op = Predicate::Op;
    const bool fits = [&] {
        switch (question->kind) {
            case QuestionKind::boolean:       return p.op == Op::is_true;
            case QuestionKind::integer_range: return p.op == Op::equals || p.op == Op::at_least || p.op == Op::at_most;
            case QuestionKind::choice:        return p.op == Op::one_of;
        }
        return false;
    }();
    if (!fits)
        throw ValidationError("rule '" + rule.id + "' uses a predicate that does not fit " +
                                  std::string(to_string(question->kind)) + " question '" +
                                  p.question_id + "'",
                              p.question_id);
    if (p.op == Op::one_of) {
        if (p.options.empty())
            throw ValidationError("rule '" + rule.id + "' has an empty option list for '" +
                                      p.question_id + "'",
                                  p.question_id);
        for (const auto& option : p.options)
            if (std::find(question->options.begin(), question->options.end(), option) ==
                question->options.end())
                throw ValidationError("rule '" + rule.id + "' requires unknown option '" +
                                          option + "' of question '" + p.question_id + "'",
                                      p.question_id);
    }
}

} // namespace

void validate(const Questionnaire& q) {
    std::set<std::string> seen;
    for (const auto& question : q.questions) {
        if (question.id.empty()) throw ValidationError("question with empty id");
        if (!seen.insert(question.id).second)
            throw ValidationError("duplicate question id '" + question.id + "'", question.id);
        if (question.kind == QuestionKind::integer_range && question.min > question.max)
            throw ValidationError("question '" + question.id + "' has min > max", question.id);
        if (question.kind == QuestionKind::choice) {
            if (question.options.empty())
                throw ValidationError("question '" + question.id + "' has no options", question.id);
            std::set<std::string> opts(question.options.begin(), question.options.end());
            if (opts.size() != question.options.size())
                throw ValidationError("question '" + question.id + "' has duplicate options",
                                      question.id);
        }
    }

    std::set<std::string> rule_ids;
    for (const auto& rule : q.rules) {
        if (rule.id.empty()) throw ValidationError("rule with empty id");
        if (!rule_ids.insert(rule.id).second)
            throw ValidationError("duplicate rule id '" + rule.id + "'", rule.id);
        if (rule.all_of.empty() && rule.any_of.empty())
            throw ValidationError("rule '" + rule.id + "' has neither all_of nor any_of", rule.id);
        if (rule.min_age && rule.max_age && *rule.min_age > *rule.max_age)
            throw ValidationError("rule '" + rule.id + "' has min_age > max_age", rule.id);
        for (const auto& p : rule.all_of) validate_predicate(q, rule, p);
        for (const auto& p : rule.any_of) validate_predicate(q, rule, p);
    }
}

void validate_answers(const Questionnaire& q, const Response& r) {
    if (r.age < 0 || r.age > max_age_years)
        throw ScoringError("domain_violation", "age " + std::to_string(r.age) + " outside [0, 130]",
                           "age");
    for (const auto& [id, value] : r.answers) {
        const Question* question = q.find(id);
        if (!question)
            throw ScoringError("unknown_question", "answer for unknown question '" + id + "'", id);
        if (!question->accepts(value))
            throw ScoringError("domain_violation",
                               "answer " + describe(value) + " is outside the domain of question '" +
                                   id + "'",
                               id);
    }
}

SCSResult score(const Questionnaire& q, const Response& r, const AdviceText& advice) {
    if (r.questionnaire_version != q.version)
        throw ScoringError("version_mismatch",
                           "response is for questionnaire version '" + r.questionnaire_version +
                               "' but '" + q.version + "' is loaded",
                           r.questionnaire_version);
    validate_answers(q, r);

    auto answer = [&](const Predicate& p) -> const AnswerValue& {
        const auto it = r.answers.find(p.question_id);
        if (it == r.answers.end())
            throw ScoringError("missing_answer", "no answer for question '" + p.question_id + "'",
                               p.question_id);
        return it->second;
    };

    // Every referenced answer must be present, whether or not a rule's gates
    // would let it matter.
    for (const auto& rule : q.rules) {
        for (const auto& p : rule.all_of) answer(p);
        for (const auto& p : rule.any_of) answer(p);
    }

    SCSResult result;
    for (const auto& rule : q.rules) {
        if (!rule.admits(r.age, r.sex)) continue;
        const bool all = std::all_of(rule.all_of.begin(), rule.all_of.end(),
                                     [&](const Predicate& p) { return p.holds(answer(p)); });
        if (!all) continue;
        const bool any = rule.any_of.empty() ||
                         std::any_of(rule.any_of.begin(), rule.any_of.end(),
                                     [&](const Predicate& p) { return p.holds(answer(p)); });
        if (any) result.fired_rules.push_back(rule.id);
    }
    result.scs = result.fired_rules.empty() ? Scs::low : Scs::high;
    result.advice = advice.for_score(result.scs);
    return result;
}

} // namespace adscreen::rules
