#include "adscreen/common/types.hpp"

namespace adscreen {

std::string_view to_string(CancerType c) {
    switch (c) {
        case CancerType::breast: return "breast";
        case CancerType::colon:  return "colon";
        case CancerType::lung:   return "lung";
    }
    return "unknown";
}

std::string_view to_string(Sex s) {
    switch (s) {
        case Sex::female:      return "female";
        case Sex::male:        return "male";
        case Sex::unspecified: return "unspecified";
    }
    return "unknown";
}

std::string_view to_string(Scs s) { return s == Scs::high ? "HIGH" : "LOW"; }

std::optional<CancerType> parse_cancer_type(std::string_view text) {
    for (auto c : all_cancer_types)
        if (to_string(c) == text) return c;
    return std::nullopt;
}

std::optional<Sex> parse_sex(std::string_view text) {
    if (text == "female") return Sex::female;
    if (text == "male") return Sex::male;
    if (text == "unspecified") return Sex::unspecified;
    return std::nullopt;
}

std::optional<Scs> parse_scs(std::string_view text) {
    if (text == "HIGH") return Scs::high;
    if (text == "LOW") return Scs::low;
    return std::nullopt;
}

} // namespace adscreen
