#pragma once

#include "adscreen/common/time.hpp"
#include "adscreen/common/types.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace adscreen::textfeat {

// Lowercases ASCII letters and splits on every non-alphanumeric byte.
std::vector<std::string> normalize(std::string_view text);

struct QueryRecord {
    std::string user_id;
    Timestamp timestamp;
    std::string text;
};

inline constexpr auto history_window = std::chrono::days{90};
inline constexpr auto min_history_span = std::chrono::days{14};

struct UserHistory {
    std::string user_id;
    std::vector<QueryRecord> records; // ascending timestamp, all within the window
    Timestamp anchor;                 // questionnaire completion
    int age = 0;
    Sex sex = Sex::unspecified;
    std::optional<Scs> label;

    std::chrono::seconds span() const;
};

// Builds a history from unordered records: keeps those in
// [anchor - 90 days, anchor] and sorts them by time (stable).
UserHistory make_history(std::string user_id, std::vector<QueryRecord> records, Timestamp anchor,
                         int age, Sex sex, std::optional<Scs> label = std::nullopt);

// Keeps histories whose first-to-last span is at least 14 days.
std::vector<UserHistory> filter_eligible(std::vector<UserHistory> histories);

struct SymptomEntry {
    std::string symptom_id;
    std::string name;
    std::vector<std::vector<std::string>> phrases; // normalized token sequences
};

class SymptomLexicon {
public:
    SymptomLexicon() = default;
    // Phrases are normalized on the way in. Throws ValidationError on duplicate
    // ids or phrases that normalize to nothing.
    void add(std::string symptom_id, std::string name, const std::vector<std::string>& phrases);

    const std::vector<SymptomEntry>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }

private:
    std::vector<SymptomEntry> entries_;
};

// Per symptom id (every lexicon id present), the number of queries that
// mention at least one of its phrases as a contiguous token run.
std::map<std::string, std::int64_t> count_symptoms(const UserHistory& h, const SymptomLexicon& lex);

struct VocabularyTerm {
    std::string term; // "word" or "word word"
    double user_prevalence = 0.0;
    std::int64_t n_users_with_term = 0;
};

inline constexpr int min_prevalence_percent = 5;

class Vocabulary {
public:
    Vocabulary() = default;
    Vocabulary(std::vector<VocabularyTerm> terms, std::int64_t built_from_n_users,
               std::set<std::string> stopwords);

    const std::vector<VocabularyTerm>& terms() const { return terms_; }
    std::int64_t built_from_n_users() const { return n_users_; }
    const std::set<std::string>& stopwords() const { return stopwords_; }
    std::optional<std::size_t> index_of(std::string_view term) const;
    std::size_t size() const { return terms_.size(); }

private:
    std::vector<VocabularyTerm> terms_;
    std::int64_t n_users_ = 0;
    std::set<std::string> stopwords_;
    std::unordered_map<std::string, std::size_t> index_;
};

// Unigrams after stopword removal, then bigrams of consecutive survivors.
std::vector<std::string> query_terms(std::string_view text, const std::set<std::string>& stopwords);

// Throws ValidationError("no users") on empty input.
Vocabulary build_vocabulary(const std::vector<UserHistory>& histories,
                            const std::set<std::string>& stopwords);

struct FeatureVector {
    std::vector<std::int64_t> symptom_counts; // lexicon order
    std::vector<std::int64_t> term_counts;    // vocabulary order
    int age = 0;
    double sex = 0.5; // female 1, male 0, unspecified 0.5
    std::optional<Scs> label;

    std::vector<double> dense() const;
};

double encode_sex(Sex sex);

FeatureVector vectorize(const UserHistory& h, const SymptomLexicon& lex, const Vocabulary& v);

// Column names matching FeatureVector::dense(): "symptom:<id>", "term:<term>",
// "age", "sex".
std::vector<std::string> feature_names(const SymptomLexicon& lex, const Vocabulary& v);

} // namespace adscreen::textfeat
