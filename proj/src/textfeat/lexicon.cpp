#include "adscreen/common/error.hpp"
#include "adscreen/textfeat/textfeat.hpp"

#include <algorithm>

namespace adscreen::textfeat {
namespace {

bool contains_run(const std::vector<std::string>& tokens, const std::vector<std::string>& phrase) {
    if (phrase.empty() || phrase.size() > tokens.size()) return false;
    return std::search(tokens.begin(), tokens.end(), phrase.begin(), phrase.end()) != tokens.end();
}

} // namespace

void SymptomLexicon::add(std::string symptom_id, std::string name, const std::vector<std::string>& phrases) {
    if (symptom_id.empty()) throw ValidationError("symptom with empty id");
    for (const auto& e : entries_)
        if (e.symptom_id == symptom_id)
            throw ValidationError("duplicate symptom id '" + symptom_id + "'", symptom_id);
    if (phrases.empty())
        throw ValidationError("symptom '" + symptom_id + "' has no phrases", symptom_id);
    SymptomEntry entry{std::move(symptom_id), std::move(name), {}};
    for (const auto& p : phrases) {
        auto tokens = normalize(p);
        if (tokens.empty())
            throw ValidationError("symptom '" + entry.symptom_id + "' has an empty phrase",
                                  entry.symptom_id);
        entry.phrases.push_back(std::move(tokens));
    }
    entries_.push_back(std::move(entry));
}

std::map<std::string, std::int64_t> count_symptoms(const UserHistory& h, const SymptomLexicon& lex) {
    std::map<std::string, std::int64_t> counts;
    for (const auto& e : lex.entries()) counts[e.symptom_id] = 0;
    for (const auto& record : h.records) {
        const auto tokens = normalize(record.text);
        for (const auto& e : lex.entries()) {
            const bool mentioned = std::any_of(e.phrases.begin(), e.phrases.end(),
                                               [&](const auto& p) { return contains_run(tokens, p); });
            if (mentioned) ++counts[e.symptom_id];
        }
    }
    return counts;
}

} // namespace adscreen::textfeat
