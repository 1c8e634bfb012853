#include "adscreen/textfeat/query_log.hpp"

#include "adscreen/common/error.hpp"
#include "adscreen/common/io.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <fstream>
#include <istream>
#include <map>
#include <ostream>

namespace adscreen::textfeat {
namespace {

using nlohmann::json;

template <typename F>
void for_each_json_line(std::istream& in, const std::string& source, F&& handle) {
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const std::string where = fmt::format("{}:{}", source, line_no);
        json j;
        try {
            j = json::parse(line);
        } catch (const json::parse_error& e) {
            throw ParseError(where + ": malformed JSON: " + e.what(), where);
        }
        if (!j.is_object()) throw ParseError(where + ": expected an object", where);
        try {
            handle(j, where);
        } catch (const json::exception& e) {
            throw ParseError(where + ": " + e.what(), where);
        } catch (const ParseError& e) {
            if (e.subject() == where) throw;
            throw ParseError(where + ": " + e.what(), where);
        }
    }
}

std::string string_field(const json& j, const char* key, const std::string& where) {
    const auto it = j.find(key);
    if (it == j.end() || !it->is_string())
        throw ParseError(where + ": missing string field '" + key + "'", where);
    return it->get<std::string>();
}

std::ifstream open_or_throw(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open file: " + path.string(), path.string());
    return in;
}

} // namespace

std::vector<QueryRecord> parse_query_log(std::istream& in, const std::string& source) {
    std::vector<QueryRecord> records;
    for_each_json_line(in, source, [&](const json& j, const std::string& where) {
        QueryRecord r;
        r.user_id = string_field(j, "user_id", where);
        r.timestamp = parse_rfc3339(string_field(j, "ts", where));
        r.text = string_field(j, "text", where);
        if (trim(r.text).empty()) throw ParseError(where + ": empty query text", where);
        records.push_back(std::move(r));
    });
    return records;
}

std::vector<QueryRecord> load_query_log(const std::filesystem::path& path) {
    auto in = open_or_throw(path);
    return parse_query_log(in, path.string());
}

std::vector<UserProfile> parse_profiles(std::istream& in, const std::string& source) {
    std::vector<UserProfile> profiles;
    for_each_json_line(in, source, [&](const json& j, const std::string& where) {
        UserProfile p;
        p.user_id = string_field(j, "user_id", where);
        if (!j.contains("age") || !j["age"].is_number_integer())
            throw ParseError(where + ": missing integer field 'age'", where);
        p.age = j["age"].get<int>();
        if (p.age < 0 || p.age > 130) throw ParseError(where + ": age outside [0, 130]", where);
        const auto sex = parse_sex(string_field(j, "sex", where));
        if (!sex) throw ParseError(where + ": unknown sex", where);
        p.sex = *sex;
        p.anchor = parse_rfc3339(string_field(j, "anchor_ts", where));
        if (const auto it = j.find("label"); it != j.end() && !it->is_null()) {
            const auto label = it->is_string() ? parse_scs(it->get<std::string>()) : std::nullopt;
            if (!label) throw ParseError(where + ": label must be \"HIGH\" or \"LOW\"", where);
            p.label = label;
        }
        profiles.push_back(std::move(p));
    });
    return profiles;
}

std::vector<UserProfile> load_profiles(const std::filesystem::path& path) {
    auto in = open_or_throw(path);
    return parse_profiles(in, path.string());
}

std::vector<UserHistory> assemble_histories(std::vector<QueryRecord> records,
                                            const std::vector<UserProfile>& profiles) {
    std::map<std::string, std::vector<QueryRecord>> by_user;
    for (auto& r : records) by_user[r.user_id].push_back(std::move(r));
    std::vector<UserHistory> histories;
    histories.reserve(profiles.size());
    for (const auto& p : profiles) {
        auto it = by_user.find(p.user_id);
        std::vector<QueryRecord> own;
        if (it != by_user.end()) own = std::move(it->second);
        histories.push_back(make_history(p.user_id, std::move(own), p.anchor, p.age, p.sex, p.label));
    }
    return histories;
}

SymptomLexicon load_lexicon(const std::filesystem::path& path) {
    json root;
    try {
        root = json::parse(read_file(path));
    } catch (const json::parse_error& e) {
        throw ParseError(path.string() + ": malformed JSON: " + e.what(), path.string());
    }
    if (!root.is_object() || !root.contains("symptoms") || !root["symptoms"].is_array())
        throw ParseError(path.string() + ": expected {\"symptoms\": [...]}", path.string());
    SymptomLexicon lex;
    for (const auto& s : root["symptoms"]) {
        if (!s.is_object() || !s.contains("id") || !s.contains("phrases"))
            throw ParseError(path.string() + ": symptom entries need 'id' and 'phrases'", path.string());
        lex.add(s["id"].get<std::string>(), s.value("name", s["id"].get<std::string>()),
                s["phrases"].get<std::vector<std::string>>());
    }
    return lex;
}

std::set<std::string> load_stopwords(const std::filesystem::path& path) {
    json root;
    try {
        root = json::parse(read_file(path));
    } catch (const json::parse_error& e) {
        throw ParseError(path.string() + ": malformed JSON: " + e.what(), path.string());
    }
    if (!root.is_array()) throw ParseError(path.string() + ": expected an array of words", path.string());
    std::set<std::string> words;
    for (const auto& w : root) {
        if (!w.is_string()) throw ParseError(path.string() + ": stopwords must be strings", path.string());
        for (auto& t : normalize(w.get<std::string>())) words.insert(std::move(t));
    }
    return words;
}

std::string vocabulary_to_json(const Vocabulary& v) {
    json terms = json::array();
    for (const auto& t : v.terms())
        terms.push_back({{"term", t.term}, {"user_prevalence", t.user_prevalence}, {"users", t.n_users_with_term}});
    json root{{"format", "adscreen-vocabulary"},
              {"version", 1},
              {"built_from_n_users", v.built_from_n_users()},
              {"min_prevalence_percent", min_prevalence_percent},
              {"stopwords", v.stopwords()},
              {"terms", terms}};
    return root.dump(2) + "\n";
}

Vocabulary vocabulary_from_json(std::string_view document) {
    json root;
    try {
        root = json::parse(document);
        if (root.value("format", "") != "adscreen-vocabulary")
            throw ParseError("not a vocabulary document");
        std::vector<VocabularyTerm> terms;
        for (const auto& t : root.at("terms"))
            terms.push_back({t.at("term").get<std::string>(), t.at("user_prevalence").get<double>(),
                             t.at("users").get<std::int64_t>()});
        return Vocabulary(std::move(terms), root.at("built_from_n_users").get<std::int64_t>(),
                          root.at("stopwords").get<std::set<std::string>>());
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed vocabulary: ") + e.what());
    }
}

void write_feature_csv(std::ostream& out, const std::vector<std::string>& names,
                       const std::vector<FeatureVector>& rows) {
    auto quote = [](const std::string& s) {
        if (s.find_first_of(",\"\n") == std::string::npos) return s;
        std::string q = "\"";
        for (char c : s) {
            if (c == '"') q += '"';
            q += c;
        }
        return q + '"';
    };
    for (const auto& n : names) out << quote(n) << ',';
    out << "label\n";
    for (const auto& row : rows) {
        for (double v : row.dense()) out << format_double(v) << ',';
        if (row.label) out << (*row.label == Scs::high ? '1' : '0');
        out << '\n';
    }
}

} // namespace adscreen::textfeat
