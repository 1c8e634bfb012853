#include "adscreen/common/error.hpp"
#include "adscreen/textfeat/textfeat.hpp"

#include <algorithm>
#include <unordered_set>

namespace adscreen::textfeat {

Vocabulary::Vocabulary(std::vector<VocabularyTerm> terms, std::int64_t built_from_n_users,
                       std::set<std::string> stopwords)
    : terms_(std::move(terms)), n_users_(built_from_n_users), stopwords_(std::move(stopwords)) {
    for (std::size_t i = 0; i < terms_.size(); ++i) {
        if (!index_.emplace(terms_[i].term, i).second)
            throw ValidationError("duplicate vocabulary term '" + terms_[i].term + "'", terms_[i].term);
    }
}

std::optional<std::size_t> Vocabulary::index_of(std::string_view term) const {
    const auto it = index_.find(std::string(term));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::vector<std::string> query_terms(std::string_view text, const std::set<std::string>& stopwords) {
    std::vector<std::string> kept;
    for (auto& token : normalize(text))
        if (!stopwords.count(token)) kept.push_back(std::move(token));
    std::vector<std::string> terms = kept;
    for (std::size_t i = 0; i + 1 < kept.size(); ++i) terms.push_back(kept[i] + ' ' + kept[i + 1]);
    return terms;
}

Vocabulary build_vocabulary(const std::vector<UserHistory>& histories,
                            const std::set<std::string>& stopwords) {
    if (histories.empty()) throw ValidationError("no users");

    std::unordered_map<std::string, std::int64_t> users_with;
    for (const auto& h : histories) {
        std::unordered_set<std::string> seen;
        for (const auto& r : h.records)
            for (auto& t : query_terms(r.text, stopwords)) seen.insert(std::move(t));
        for (const auto& t : seen) ++users_with[t];
    }

    const auto n = static_cast<std::int64_t>(histories.size());
    std::vector<VocabularyTerm> terms;
    for (const auto& [term, count] : users_with) {
        // count / n >= 5%, in integers so the boundary is exact.
        if (count * 100 >= min_prevalence_percent * n)
            terms.push_back({term, static_cast<double>(count) / static_cast<double>(n), count});
    }
    std::sort(terms.begin(), terms.end(), [](const VocabularyTerm& a, const VocabularyTerm& b) {
        if (a.n_users_with_term != b.n_users_with_term) return a.n_users_with_term > b.n_users_with_term;
        return a.term < b.term;
    });
    return Vocabulary(std::move(terms), n, stopwords);
}

} // namespace adscreen::textfeat
