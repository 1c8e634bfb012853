#include "adscreen/textfeat/textfeat.hpp"

namespace adscreen::textfeat {

double encode_sex(Sex sex) {
    switch (sex) {
        case Sex::female:      return 1.0;
        case Sex::male:        return 0.0;
        case Sex::unspecified: return 0.5;
    }
    return 0.5;
}

std::vector<double> FeatureVector::dense() const {
    std::vector<double> out;
    out.reserve(symptom_counts.size() + term_counts.size() + 2);
    for (auto c : symptom_counts) out.push_back(static_cast<double>(c));
    for (auto c : term_counts) out.push_back(static_cast<double>(c));
    out.push_back(static_cast<double>(age));
    out.push_back(sex);
    return out;
}

FeatureVector vectorize(const UserHistory& h, const SymptomLexicon& lex, const Vocabulary& v) {
    FeatureVector fv;
    const auto symptoms = count_symptoms(h, lex);
    for (const auto& e : lex.entries()) fv.symptom_counts.push_back(symptoms.at(e.symptom_id));

    fv.term_counts.assign(v.size(), 0);
    for (const auto& r : h.records)
        for (const auto& t : query_terms(r.text, v.stopwords()))
            if (auto idx = v.index_of(t)) ++fv.term_counts[*idx];

    fv.age = h.age;
    fv.sex = encode_sex(h.sex);
    fv.label = h.label;
    return fv;
}

std::vector<std::string> feature_names(const SymptomLexicon& lex, const Vocabulary& v) {
    std::vector<std::string> names;
    for (const auto& e : lex.entries()) names.push_back("symptom:" + e.symptom_id);
    for (const auto& t : v.terms()) names.push_back("term:" + t.term);
    names.push_back("age");
    names.push_back("sex");
    return names;
}

} // namespace adscreen::textfeat
