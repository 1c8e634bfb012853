#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace adscreen {

std::string read_file(const std::filesystem::path& path);

// Writes to a sibling temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

// FNV-1a, 64-bit. Stable across platforms.
std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t value);

// Minimal RFC 4180 field splitting (quoted fields, doubled quotes). Throws
// ParseError on an unterminated quote.
std::vector<std::string> split_csv_line(std::string_view line);

// Shortest round-trip representation.
std::string format_double(double value);

std::string_view trim(std::string_view s);

} // namespace adscreen
