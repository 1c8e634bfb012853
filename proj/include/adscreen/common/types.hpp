#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace adscreen {

enum class CancerType { breast, colon, lung };
enum class Sex { female, male, unspecified };
enum class Scs { low, high };

inline constexpr std::array<CancerType, 3> all_cancer_types{
    CancerType::breast, CancerType::colon, CancerType::lung};

std::string_view to_string(CancerType c);
std::string_view to_string(Sex s);
std::string_view to_string(Scs s);

std::optional<CancerType> parse_cancer_type(std::string_view text);
std::optional<Sex> parse_sex(std::string_view text);
std::optional<Scs> parse_scs(std::string_view text);

} // namespace adscreen
