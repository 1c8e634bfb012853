#include "adscreen/common/io.hpp"
#include "adscreen/rules/json.hpp"
#include "adscreen/rules/questionnaire.hpp"

#include <initializer_list>

namespace adscreen::rules {
namespace {

using nlohmann::json;

void require_object(const json& j, const std::string& where) {
    if (!j.is_object()) throw ValidationError(where + " must be an object", where);
}

void check_keys(const json& j, std::initializer_list<std::string_view> allowed,
                const std::string& where) {
    for (const auto& [key, _] : j.items()) {
        bool ok = false;
        for (auto a : allowed) ok = ok || key == a;
        if (!ok) throw ValidationError("unknown key '" + key + "' in " + where, key);
    }
}

const json& required(const json& j, const char* key, const std::string& where) {
    const auto it = j.find(key);
    if (it == j.end()) throw ValidationError(std::string("missing key '") + key + "' in " + where, key);
    return *it;
}

std::string get_string(const json& j, const char* key, const std::string& where) {
    const json& v = required(j, key, where);
    if (!v.is_string()) throw ValidationError(std::string("'") + key + "' in " + where + " must be a string", key);
    return v.get<std::string>();
}

std::int64_t get_integer(const json& v, const std::string& what) {
    if (!v.is_number_integer()) throw ValidationError(what + " must be an integer", what);
    return v.get<std::int64_t>();
}

Question parse_question(const json& j, std::size_t index) {
    const std::string where = "questions[" + std::to_string(index) + "]";
    require_object(j, where);
    check_keys(j, {"id", "prompt", "kind", "allowed"}, where);
    Question q;
    q.id = get_string(j, "id", where);
    q.prompt = get_string(j, "prompt", where);
    const auto kind = get_string(j, "kind", where);
    const auto allowed = j.find("allowed");
    if (kind == "boolean") {
        q.kind = QuestionKind::boolean;
        if (allowed != j.end() && !allowed->is_null())
            throw ValidationError("boolean question '" + q.id + "' takes no 'allowed'", q.id);
    } else if (kind == "integer-range") {
        q.kind = QuestionKind::integer_range;
        if (allowed == j.end()) throw ValidationError("question '" + q.id + "' needs 'allowed'", q.id);
        require_object(*allowed, q.id + ".allowed");
        check_keys(*allowed, {"min", "max"}, q.id + ".allowed");
        q.min = get_integer(required(*allowed, "min", q.id), q.id + ".allowed.min");
        q.max = get_integer(required(*allowed, "max", q.id), q.id + ".allowed.max");
    } else if (kind == "choice") {
        q.kind = QuestionKind::choice;
        if (allowed == j.end() || !allowed->is_array())
            throw ValidationError("choice question '" + q.id + "' needs an 'allowed' option list", q.id);
        for (const auto& opt : *allowed) {
            if (!opt.is_string()) throw ValidationError("options of '" + q.id + "' must be strings", q.id);
            q.options.push_back(opt.get<std::string>());
        }
    } else {
        throw ValidationError("question '" + q.id + "' has unknown kind '" + kind + "'", q.id);
    }
    return q;
}

Predicate parse_predicate(const std::string& rule_id, const std::string& question_id, const json& v) {
    Predicate p;
    p.question_id = question_id;
    if (v.is_boolean()) {
        if (!v.get<bool>())
            throw ValidationError("rule '" + rule_id + "': only positive predicates are supported ('" +
                                      question_id + "': false)",
                                  question_id);
        p.op = Predicate::Op::is_true;
    } else if (v.is_number_integer()) {
        p.op = Predicate::Op::equals;
        p.number = v.get<std::int64_t>();
    } else if (v.is_object()) {
        check_keys(v, {"at_least", "at_most"}, "predicate '" + question_id + "'");
        if (v.size() != 1)
            throw ValidationError("predicate on '" + question_id + "' needs exactly one of at_least/at_most",
                                  question_id);
        if (v.contains("at_least")) {
            p.op = Predicate::Op::at_least;
            p.number = get_integer(v["at_least"], question_id + ".at_least");
        } else {
            p.op = Predicate::Op::at_most;
            p.number = get_integer(v["at_most"], question_id + ".at_most");
        }
    } else if (v.is_string()) {
        p.op = Predicate::Op::one_of;
        p.options.push_back(v.get<std::string>());
    } else if (v.is_array()) {
        p.op = Predicate::Op::one_of;
        for (const auto& opt : v) {
            if (!opt.is_string())
                throw ValidationError("option list for '" + question_id + "' must hold strings", question_id);
            p.options.push_back(opt.get<std::string>());
        }
    } else {
        throw ValidationError("unsupported predicate for '" + question_id + "' in rule '" + rule_id + "'",
                              question_id);
    }
    return p;
}

std::vector<Predicate> parse_predicates(const std::string& rule_id, const json& j, const char* key) {
    std::vector<Predicate> out;
    const auto it = j.find(key);
    if (it == j.end() || it->is_null()) return out;
    require_object(*it, rule_id + "." + key);
    for (const auto& [question_id, v] : it->items()) out.push_back(parse_predicate(rule_id, question_id, v));
    return out;
}

std::optional<int> parse_age(const json& j, const char* key, const std::string& rule_id) {
    const auto it = j.find(key);
    if (it == j.end() || it->is_null()) return std::nullopt;
    const auto value = get_integer(*it, rule_id + "." + key);
    if (value < 0 || value > max_age_years)
        throw ValidationError("rule '" + rule_id + "' has " + key + " outside [0, 130]", rule_id);
    return static_cast<int>(value);
}

ReferralRule parse_rule(const json& j, std::size_t index) {
    const std::string where = "rules[" + std::to_string(index) + "]";
    require_object(j, where);
    check_keys(j, {"id", "all_of", "any_of", "min_age", "max_age", "sex"}, where);
    ReferralRule rule;
    rule.id = get_string(j, "id", where);
    rule.all_of = parse_predicates(rule.id, j, "all_of");
    rule.any_of = parse_predicates(rule.id, j, "any_of");
    rule.min_age = parse_age(j, "min_age", rule.id);
    rule.max_age = parse_age(j, "max_age", rule.id);
    if (const auto it = j.find("sex"); it != j.end()) {
        if (!it->is_string()) throw ValidationError("rule '" + rule.id + "': sex must be a string", rule.id);
        const auto s = it->get<std::string>();
        if (s == "any") rule.sex = SexGate::any;
        else if (s == "female") rule.sex = SexGate::female;
        else if (s == "male") rule.sex = SexGate::male;
        else throw ValidationError("rule '" + rule.id + "' has unknown sex '" + s + "'", rule.id);
    }
    return rule;
}

json predicate_to_json(const Predicate& p) {
    switch (p.op) {
        case Predicate::Op::is_true:  return true;
        case Predicate::Op::equals:   return p.number;
        case Predicate::Op::at_least: return json{{"at_least", p.number}};
        case Predicate::Op::at_most:  return json{{"at_most", p.number}};
        case Predicate::Op::one_of:
            if (p.options.size() == 1) return p.options.front();
            return p.options;
    }
    return nullptr;
}

} // namespace

Questionnaire load_ruleset(std::string_view document) {
    json root;
    try {
        root = json::parse(document);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("malformed ruleset document: ") + e.what());
    }
    require_object(root, "ruleset");
    check_keys(root, {"cancer_type", "version", "questions", "rules"}, "ruleset");

    Questionnaire q;
    const auto cancer = get_string(root, "cancer_type", "ruleset");
    const auto parsed = parse_cancer_type(cancer);
    if (!parsed) throw ValidationError("unknown cancer_type '" + cancer + "'", cancer);
    q.cancer_type = *parsed;
    q.version = get_string(root, "version", "ruleset");

    const json& questions = required(root, "questions", "ruleset");
    if (!questions.is_array()) throw ValidationError("'questions' must be an array", "questions");
    for (std::size_t i = 0; i < questions.size(); ++i) q.questions.push_back(parse_question(questions[i], i));

    const json& rules = required(root, "rules", "ruleset");
    if (!rules.is_array()) throw ValidationError("'rules' must be an array", "rules");
    for (std::size_t i = 0; i < rules.size(); ++i) q.rules.push_back(parse_rule(rules[i], i));

    validate(q);
    return q;
}

Questionnaire load_ruleset_file(const std::filesystem::path& path) {
    return load_ruleset(read_file(path));
}

json questions_to_json(const Questionnaire& q) {
    json out = json::array();
    for (const auto& question : q.questions) {
        json item{{"id", question.id}, {"prompt", question.prompt}, {"kind", to_string(question.kind)}};
        if (question.kind == QuestionKind::integer_range)
            item["allowed"] = json{{"min", question.min}, {"max", question.max}};
        else if (question.kind == QuestionKind::choice)
            item["allowed"] = question.options;
        out.push_back(std::move(item));
    }
    return out;
}

json to_document(const Questionnaire& q) {
    json rules = json::array();
    for (const auto& rule : q.rules) {
        json all = json::object();
        for (const auto& p : rule.all_of) all[p.question_id] = predicate_to_json(p);
        json any = json::object();
        for (const auto& p : rule.any_of) any[p.question_id] = predicate_to_json(p);
        json item{{"id", rule.id}, {"all_of", all}, {"any_of", any},
                  {"sex", rule.sex == SexGate::any ? "any" : rule.sex == SexGate::female ? "female" : "male"}};
        item["min_age"] = rule.min_age ? json(*rule.min_age) : json(nullptr);
        item["max_age"] = rule.max_age ? json(*rule.max_age) : json(nullptr);
        rules.push_back(std::move(item));
    }
    return json{{"cancer_type", to_string(q.cancer_type)},
                {"version", q.version},
                {"questions", questions_to_json(q)},
                {"rules", rules}};
}

json answer_to_json(const AnswerValue& value) {
    return std::visit([](const auto& v) { return json(v); }, value);
}

AnswerValue answer_from_json(const Question& question, const json& value) {
    auto reject = [&] {
        return ScoringError("domain_violation",
                            "answer " + value.dump() + " is outside the domain of question '" +
                                question.id + "'",
                            question.id);
    };
    AnswerValue out;
    switch (question.kind) {
        case QuestionKind::boolean:
            if (!value.is_boolean()) throw reject();
            out = value.get<bool>();
            break;
        case QuestionKind::integer_range:
            if (!value.is_number_integer()) throw reject();
            out = value.get<std::int64_t>();
            break;
        case QuestionKind::choice:
            if (!value.is_string()) throw reject();
            out = value.get<std::string>();
            break;
    }
    if (!question.accepts(out)) throw reject();
    return out;
}

} // namespace adscreen::rules
