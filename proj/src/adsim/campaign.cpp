#include "adscreen/adsim/campaign.hpp"

#include "adscreen/common/error.hpp"

#include <fmt/format.h>

namespace adscreen::adsim {

namespace {

template <typename T>
const T& pick_for(const std::vector<T>& items, CancerType c, Rng& rng, const char* what) {
    std::vector<const T*> matching;
    for (const auto& it : items)
        if (it.cancer == c) matching.push_back(&it);
    if (matching.empty())
        throw ValidationError(fmt::format("campaign has no {} for {}", what, to_string(c)), std::string(to_string(c)));
    return *matching[std::uniform_int_distribution<std::size_t>(0, matching.size() - 1)(rng)];
}

} // namespace

const TriggerKeyword& Campaign::pick_keyword(CancerType c, Rng& rng) const {
    return pick_for(keywords, c, rng, "keywords");
}

const Creative& Campaign::pick_creative(CancerType c, Rng& rng) const {
    return pick_for(creatives, c, rng, "creatives");
}

std::string Campaign::keyword_id_for(std::string_view query_text) const {
    for (const auto& k : keywords)
        if (k.text == query_text) return k.id;
    return "other";
}

Campaign make_default_campaign() {
    Campaign c;
    const std::vector<std::pair<std::string, std::string>> templates{
        {"symptoms", "symptoms of {}"}, {"signs", "signs of {}"}, {"diagnosis", "{} diagnosis"},
        {"quiz", "{} quiz"},            {"questionnaire", "{} questionnaire"}};
    const std::vector<std::pair<std::string, std::string>> titles{
        {"do-you-have-it", "{} - Do you have it?"},
        {"think-you-have-it", "{} - Think you have it?"},
        {"worried-you-have-it", "{} - Worried you have it?"}};
    for (auto cancer : all_cancer_types) {
        const std::string name = fmt::format("{} cancer", to_string(cancer));
        std::string display = name;
        display[0] = static_cast<char>(display[0] - 'a' + 'A');
        for (const auto& [id, t] : templates)
            c.keywords.push_back({fmt::format("{}-{}", to_string(cancer), id), cancer, fmt::format(fmt::runtime(t), name)});
        for (const auto& [id, t] : titles)
            c.creatives.push_back({fmt::format("{}-{}", to_string(cancer), id), cancer, fmt::format(fmt::runtime(t), display), 1.0});
    }
    return c;
}

QuestionnaireSet load_questionnaires(const std::filesystem::path& dir) {
    QuestionnaireSet out;
    for (auto cancer : all_cancer_types)
        out.emplace(cancer, rules::load_ruleset_file(dir / fmt::format("{}.sample", to_string(cancer))));
    return out;
}

namespace {

using rules::AnswerValue;
using rules::Predicate;
using rules::Question;
using rules::QuestionKind;

AnswerValue uniform_value(const Question& q, Rng& rng) {
    switch (q.kind) {
    case QuestionKind::boolean: return bernoulli(rng, 0.5);
    case QuestionKind::integer_range: return std::uniform_int_distribution<std::int64_t>(q.min, q.max)(rng);
    case QuestionKind::choice:
        return q.options[std::uniform_int_distribution<std::size_t>(0, q.options.size() - 1)(rng)];
    }
    return false;
}

// Usually the first option or the range minimum; otherwise a uniform value
// from the rest of the domain.
AnswerValue background_value(const Question& q, double p_other, Rng& rng) {
    switch (q.kind) {
    case QuestionKind::boolean: return bernoulli(rng, p_other);
    case QuestionKind::integer_range:
        if (q.min == q.max || !bernoulli(rng, p_other)) return q.min;
        return std::uniform_int_distribution<std::int64_t>(q.min + 1, q.max)(rng);
    case QuestionKind::choice:
        if (q.options.size() == 1 || !bernoulli(rng, p_other)) return q.options.front();
        return q.options[std::uniform_int_distribution<std::size_t>(1, q.options.size() - 1)(rng)];
    }
    return false;
}

// A value of q for which p holds.
AnswerValue satisfying_value(const Question& q, const Predicate& p, Rng& rng) {
    switch (p.op) {
    case Predicate::Op::is_true: return true;
    case Predicate::Op::equals: return p.number;
    case Predicate::Op::at_least: return std::uniform_int_distribution<std::int64_t>(p.number, q.max)(rng);
    case Predicate::Op::at_most: return std::uniform_int_distribution<std::int64_t>(q.min, p.number)(rng);
    case Predicate::Op::one_of:
        return p.options[std::uniform_int_distribution<std::size_t>(0, p.options.size() - 1)(rng)];
    }
    return true;
}

// A value of q for which p fails, when one exists.
AnswerValue failing_value(const Question& q, const Predicate& p, Rng& rng) {
    for (int attempt = 0; attempt < 64; ++attempt) {
        auto v = q.kind == QuestionKind::boolean ? AnswerValue{false} : uniform_value(q, rng);
        if (!p.holds(v)) return v;
    }
    return q.kind == QuestionKind::boolean ? AnswerValue{false} : uniform_value(q, rng);
}

} // namespace

std::map<std::string, AnswerValue> synthesize_answers(const rules::Questionnaire& q, bool latent_high, int age,
                                                      Sex sex, const AnswerModel& model, Rng& rng) {
    std::map<std::string, AnswerValue> answers;
    for (const auto& question : q.questions) answers[question.id] = background_value(question, model.p_background, rng);
    if (!latent_high) return answers;

    std::vector<const rules::ReferralRule*> admitting;
    for (const auto& r : q.rules)
        if (r.admits(age, sex)) admitting.push_back(&r);
    if (admitting.empty()) return answers;
    const auto& rule = *admitting[std::uniform_int_distribution<std::size_t>(0, admitting.size() - 1)(rng)];

    auto answer = [&](const Predicate& p) {
        const auto& question = *q.find(p.question_id);
        answers[p.question_id] =
            bernoulli(rng, model.p_rule) ? satisfying_value(question, p, rng) : failing_value(question, p, rng);
    };
    for (const auto& p : rule.all_of) answer(p);
    if (!rule.any_of.empty())
        answer(rule.any_of[std::uniform_int_distribution<std::size_t>(0, rule.any_of.size() - 1)(rng)]);
    return answers;
}

} // namespace adscreen::adsim
