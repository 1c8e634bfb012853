#include <doctest.h>

#include "adscreen/common/rng.hpp"
#include "adscreen/rules/json.hpp"
#include "adscreen/rules/questionnaire.hpp"

#include "../support/paths.hpp"
#include "../support/rule_oracle.hpp"

using namespace adscreen;
using namespace adscreen::rules;
using nlohmann::json;

namespace {

const char* breast_doc = R"({
  "cancer_type": "breast",
  "version": "t1",
  "questions": [
    {"id": "lump", "prompt": "Lump?", "kind": "boolean"},
    {"id": "weeks", "prompt": "Weeks?", "kind": "integer-range", "allowed": {"min": 0, "max": 10}},
    {"id": "where", "prompt": "Where?", "kind": "choice", "allowed": ["none", "breast", "armpit"]}
  ],
  "rules": [
    {"id": "r1", "all_of": {"lump": true}, "min_age": 30, "sex": "any"}
  ]
})";

const char* colon_doc = R"({
  "cancer_type": "colon",
  "version": "c1",
  "questions": [
    {"id": "rectal_bleeding", "prompt": "Bleeding?", "kind": "boolean"},
    {"id": "fatigue", "prompt": "Tired?", "kind": "boolean"}
  ],
  "rules": [
    {"id": "bleeding_50", "all_of": {"rectal_bleeding": true}, "min_age": 50}
  ]
})";

Response response(const Questionnaire& q, std::map<std::string, AnswerValue> answers, int age,
                  Sex sex = Sex::female) {
    return Response{q.version, std::move(answers), age, sex};
}

std::string replace(std::string s, const std::string& from, const std::string& to) {
    s.replace(s.find(from), from.size(), to);
    return s;
}

// Random ruleset over `n_bool` boolean questions, as a JSON document.
json random_document(Rng& rng, int n_bool) {
    json doc{{"cancer_type", "lung"}, {"version", "rand"}, {"questions", json::array()}, {"rules", json::array()}};
    for (int i = 0; i < n_bool; ++i)
        doc["questions"].push_back({{"id", "b" + std::to_string(i)}, {"prompt", "?"}, {"kind", "boolean"}});
    std::uniform_int_distribution<int> n_rules(0, 4), coin(0, 1), age(20, 70), sex(0, 2);
    const int rules = n_rules(rng);
    for (int r = 0; r < rules; ++r) {
        json all = json::object(), any = json::object();
        for (int i = 0; i < n_bool; ++i) {
            const int pick = std::uniform_int_distribution<int>(0, 3)(rng);
            if (pick == 0) all["b" + std::to_string(i)] = true;
            if (pick == 1) any["b" + std::to_string(i)] = true;
        }
        if (all.empty() && any.empty()) all["b0"] = true;
        json rule{{"id", "r" + std::to_string(r)}, {"all_of", all}, {"any_of", any}};
        rule["sex"] = std::array<const char*, 3>{"any", "female", "male"}[static_cast<std::size_t>(sex(rng))];
        if (coin(rng)) rule["min_age"] = age(rng);
        if (coin(rng)) rule["max_age"] = 50 + age(rng);
        doc["rules"].push_back(rule);
    }
    return doc;
}

} // namespace

TEST_CASE("load_ruleset builds a validated questionnaire") {
    const auto q = load_ruleset(breast_doc);
    CHECK(q.questions.size() == 3);
    CHECK(q.cancer_type == CancerType::breast);
    CHECK(q.find("weeks")->max == 10);
    CHECK(q.find("where")->options.size() == 3);
    CHECK(q.referenced_questions() == std::set<std::string>{"lump"});
}

TEST_CASE("dangling question reference names the id") {
    const auto doc = replace(breast_doc, R"("all_of": {"lump": true})", R"("all_of": {"q_lump": true})");
    try {
        load_ruleset(doc);
        FAIL("expected a validation error");
    } catch (const ValidationError& e) {
        CHECK(e.subject() == "q_lump");
        CHECK(std::string(e.what()).find("q_lump") != std::string::npos);
    }
}

TEST_CASE("ruleset validation errors") {
    CHECK_THROWS_AS(load_ruleset("{not json"), ParseError);
    CHECK_THROWS_AS(load_ruleset("[]"), ValidationError);

    SUBCASE("duplicate question id") {
        const auto doc = replace(breast_doc, R"("id": "weeks")", R"("id": "lump")");
        try {
            load_ruleset(doc);
            FAIL("expected a validation error");
        } catch (const ValidationError& e) {
            CHECK(e.subject() == "lump");
        }
    }
    SUBCASE("unknown key is rejected in strict mode") {
        const auto doc = replace(breast_doc, R"("version": "t1",)", R"("version": "t1", "notes": "x",)");
        CHECK_THROWS_AS(load_ruleset(doc), ValidationError);
    }
    SUBCASE("integer range with min > max") {
        CHECK_THROWS_AS(load_ruleset(replace(breast_doc, R"("min": 0, "max": 10)", R"("min": 5, "max": 1)")),
                        ValidationError);
    }
    SUBCASE("empty choice list") {
        CHECK_THROWS_AS(load_ruleset(replace(breast_doc, R"(["none", "breast", "armpit"])", "[]")), ValidationError);
    }
    SUBCASE("duplicate choice options") {
        CHECK_THROWS_AS(load_ruleset(replace(breast_doc, R"(["none", "breast", "armpit"])", R"(["a", "a"])")),
                        ValidationError);
    }
    SUBCASE("negated predicate") {
        CHECK_THROWS_AS(load_ruleset(replace(breast_doc, R"({"lump": true})", R"({"lump": false})")),
                        ValidationError);
    }
    SUBCASE("rule with no predicates") {
        CHECK_THROWS_AS(load_ruleset(replace(breast_doc, R"("all_of": {"lump": true})", R"("all_of": {})")),
                        ValidationError);
    }
    SUBCASE("min_age above max_age") {
        CHECK_THROWS_AS(load_ruleset(replace(breast_doc, R"("min_age": 30)", R"("min_age": 30, "max_age": 20)")),
                        ValidationError);
    }
    SUBCASE("predicate type must fit the question") {
        CHECK_THROWS_AS(load_ruleset(replace(breast_doc, R"({"lump": true})", R"({"weeks": true})")),
                        ValidationError);
        CHECK_THROWS_AS(load_ruleset(replace(breast_doc, R"({"lump": true})", R"({"where": "elbow"})")),
                        ValidationError);
    }
    SUBCASE("duplicate rule id") {
        auto doc = json::parse(breast_doc);
        doc["rules"].push_back(doc["rules"][0]);
        CHECK_THROWS_AS(load_ruleset(doc.dump()), ValidationError);
    }
}

TEST_CASE("empty rules list scores everything LOW") {
    auto doc = json::parse(breast_doc);
    doc["rules"] = json::array();
    doc["questions"].erase(2);
    doc["questions"].erase(1);
    const auto q = load_ruleset(doc.dump());
    REQUIRE(q.questions.size() == 1);
    for (bool lump : {false, true})
        for (int age : {0, 45, 130}) {
            const auto result = score(q, response(q, {{"lump", lump}}, age));
            CHECK(result.scs == Scs::low);
            CHECK(result.fired_rules.empty());
        }
}

TEST_CASE("score examples") {
    const auto q = load_ruleset(colon_doc);
    const AdviceText advice;

    SUBCASE("all answers negative") {
        const auto r = score(q, response(q, {{"rectal_bleeding", false}, {"fatigue", false}}, 70));
        CHECK(r.scs == Scs::low);
        CHECK(r.fired_rules.empty());
        CHECK(r.advice == advice.low);
    }
    SUBCASE("age gate passes at 61") {
        const auto r = score(q, response(q, {{"rectal_bleeding", true}, {"fatigue", false}}, 61));
        CHECK(r.scs == Scs::high);
        CHECK(r.fired_rules == std::vector<std::string>{"bleeding_50"});
        CHECK(r.advice == advice.high);
    }
    SUBCASE("age gate fails at 42") {
        CHECK(score(q, response(q, {{"rectal_bleeding", true}, {"fatigue", false}}, 42)).scs == Scs::low);
    }
    SUBCASE("gate is inclusive at exactly min_age") {
        CHECK(score(q, response(q, {{"rectal_bleeding", true}, {"fatigue", false}}, 50)).scs == Scs::high);
    }
    SUBCASE("unanswered unreferenced question is allowed") {
        CHECK(score(q, response(q, {{"rectal_bleeding", true}}, 61)).scs == Scs::high);
    }
}

TEST_CASE("sex-restricted rule never fires for unspecified sex") {
    auto doc = json::parse(colon_doc);
    doc["rules"][0]["sex"] = "female";
    const auto q = load_ruleset(doc.dump());
    const std::map<std::string, AnswerValue> yes{{"rectal_bleeding", true}, {"fatigue", true}};
    CHECK(score(q, response(q, yes, 60, Sex::unspecified)).scs == Scs::low);
    CHECK(score(q, response(q, yes, 60, Sex::male)).scs == Scs::low);
    CHECK(score(q, response(q, yes, 60, Sex::female)).scs == Scs::high);
}

TEST_CASE("score errors") {
    const auto q = load_ruleset(colon_doc);
    SUBCASE("version mismatch") {
        Response r = response(q, {{"rectal_bleeding", true}}, 60);
        r.questionnaire_version = "other";
        try {
            score(q, r);
            FAIL("expected an error");
        } catch (const ScoringError& e) {
            CHECK(e.code() == "version_mismatch");
        }
    }
    SUBCASE("missing answer for a referenced question") {
        try {
            score(q, response(q, {{"fatigue", true}}, 60));
            FAIL("expected an error");
        } catch (const ScoringError& e) {
            CHECK(e.code() == "missing_answer");
            CHECK(e.subject() == "rectal_bleeding");
        }
    }
    SUBCASE("missing answer is an error even when the age gate fails") {
        CHECK_THROWS_AS(score(q, response(q, {{"fatigue", true}}, 20)), ScoringError);
    }
    SUBCASE("domain violations") {
        CHECK_THROWS_AS(score(q, response(q, {{"rectal_bleeding", std::int64_t{1}}}, 60)), ScoringError);
        CHECK_THROWS_AS(score(q, response(q, {{"rectal_bleeding", true}, {"nosuch", true}}, 60)), ScoringError);
        CHECK_THROWS_AS(score(q, response(q, {{"rectal_bleeding", true}}, 131)), ScoringError);
        CHECK_THROWS_AS(score(q, response(q, {{"rectal_bleeding", true}}, -1)), ScoringError);
    }
}

TEST_CASE("integer and choice predicates") {
    const auto q = load_ruleset(R"({
      "cancer_type": "lung", "version": "v",
      "questions": [
        {"id": "weeks", "prompt": "?", "kind": "integer-range", "allowed": {"min": 0, "max": 20}},
        {"id": "smoke", "prompt": "?", "kind": "choice", "allowed": ["never", "former", "current"]}
      ],
      "rules": [
        {"id": "long", "all_of": {"weeks": {"at_least": 3}, "smoke": ["former", "current"]}},
        {"id": "exact", "all_of": {"weeks": 7}},
        {"id": "short", "any_of": {"weeks": {"at_most": 0}}}
      ]
    })");
    auto fired = [&](std::int64_t weeks, const char* smoke) {
        return score(q, response(q, {{"weeks", weeks}, {"smoke", std::string(smoke)}}, 50)).fired_rules;
    };
    CHECK(fired(2, "current").empty());
    CHECK(fired(3, "former") == std::vector<std::string>{"long"});
    CHECK(fired(3, "never").empty());
    CHECK(fired(7, "never") == std::vector<std::string>{"exact"});
    CHECK(fired(7, "current") == std::vector<std::string>{"long", "exact"});
    CHECK(fired(0, "never") == std::vector<std::string>{"short"});
    CHECK_THROWS_AS(fired(21, "never"), ScoringError);
    CHECK_THROWS_AS(fired(1, "sometimes"), ScoringError);
}

TEST_CASE("answer_from_json enforces question domains") {
    const auto q = load_ruleset(breast_doc);
    CHECK(std::get<bool>(answer_from_json(*q.find("lump"), json(true))));
    CHECK(std::get<std::int64_t>(answer_from_json(*q.find("weeks"), json(4))) == 4);
    CHECK_THROWS_AS(answer_from_json(*q.find("weeks"), json(11)), ScoringError);
    CHECK_THROWS_AS(answer_from_json(*q.find("weeks"), json(2.5)), ScoringError);
    CHECK_THROWS_AS(answer_from_json(*q.find("lump"), json("yes")), ScoringError);
    CHECK_THROWS_AS(answer_from_json(*q.find("where"), json("knee")), ScoringError);
}

TEST_CASE("shipped sample rulesets load and round-trip") {
    for (const char* name : {"breast", "colon", "lung"}) {
        CAPTURE(name);
        const auto q = load_ruleset_file(testing::ruleset_dir() / (std::string(name) + ".sample"));
        CHECK(to_string(q.cancer_type) == name);
        CHECK(q.version.find("NON-CLINICAL-SAMPLE") != std::string::npos);
        const auto again = load_ruleset(to_document(q).dump());
        CHECK(to_document(again) == to_document(q));
    }
}

TEST_CASE("engine matches the brute-force evaluator on random small rulesets") {
    Rng rng(20240611);
    for (int trial = 0; trial < 200; ++trial) {
        const auto doc = random_document(rng, 1 + trial % 4);
        const auto q = load_ruleset(doc.dump());
        std::size_t mismatches = 0;
        testing::oracle_enumerate(doc, [&](const json& answers, int age, const std::string& sex) {
            Response r{q.version, {}, age, *parse_sex(sex)};
            for (const auto& [id, v] : answers.items()) r.answers[id] = v.get<bool>();
            const auto result = score(q, r);
            REQUIRE((result.scs == Scs::high) == !result.fired_rules.empty());
            if (result.fired_rules != testing::oracle_fired(doc, answers, age, sex)) ++mismatches;
        });
        CHECK(mismatches == 0);
    }
}

TEST_CASE("flipping a boolean answer to true never lowers the score") {
    Rng rng(77);
    for (int trial = 0; trial < 100; ++trial) {
        const auto doc = random_document(rng, 4);
        const auto q = load_ruleset(doc.dump());
        for (int mask = 0; mask < 16; ++mask)
            for (int age : {25, 55, 95})
                for (Sex sex : {Sex::female, Sex::male, Sex::unspecified}) {
                    Response r{q.version, {}, age, sex};
                    for (int i = 0; i < 4; ++i) r.answers["b" + std::to_string(i)] = ((mask >> i) & 1) != 0;
                    const auto before = score(q, r);
                    for (int i = 0; i < 4; ++i) {
                        if ((mask >> i) & 1) continue;
                        Response flipped = r;
                        flipped.answers["b" + std::to_string(i)] = true;
                        if (before.scs == Scs::high) CHECK(score(q, flipped).scs == Scs::high);
                    }
                    CHECK(score(q, r) == before);
                }
    }
}
