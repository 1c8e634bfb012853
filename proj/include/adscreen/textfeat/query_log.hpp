#pragma once

#include "adscreen/textfeat/textfeat.hpp"

#include <filesystem>
#include <iosfwd>
#include <set>
#include <string>
#include <vector>

namespace adscreen::textfeat {

struct UserProfile {
    std::string user_id;
    int age = 0;
    Sex sex = Sex::unspecified;
    Timestamp anchor;
    std::optional<Scs> label;
};

// JSON-Lines readers. Errors carry "<path>:<line>" as their subject. Blank
// lines are skipped.
std::vector<QueryRecord> parse_query_log(std::istream& in, const std::string& source = "<stream>");
std::vector<QueryRecord> load_query_log(const std::filesystem::path& path);
std::vector<UserProfile> parse_profiles(std::istream& in, const std::string& source = "<stream>");
std::vector<UserProfile> load_profiles(const std::filesystem::path& path);

// One history per profile, in profile order. Records of users without a
// profile are ignored.
std::vector<UserHistory> assemble_histories(std::vector<QueryRecord> records,
                                            const std::vector<UserProfile>& profiles);

// {"symptoms": [{"id", "name", "phrases": [...]}]}
SymptomLexicon load_lexicon(const std::filesystem::path& path);
// JSON array of words; entries are normalized.
std::set<std::string> load_stopwords(const std::filesystem::path& path);

// {"format", "version", "built_from_n_users", "stopwords", "terms": [{"term", "user_prevalence", "users"}]}
std::string vocabulary_to_json(const Vocabulary& v);
Vocabulary vocabulary_from_json(std::string_view document);

// Header row is the column names plus "label"; label is 1 (HIGH), 0 (LOW) or
// empty when unknown.
void write_feature_csv(std::ostream& out, const std::vector<std::string>& names,
                       const std::vector<FeatureVector>& rows);

} // namespace adscreen::textfeat
