#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "json.hpp"

namespace fpsa {

/// Shortest round-trip decimal form of v.
std::string format_number(double v);

/// Whole-file read; throws ConfigError when the file cannot be opened.
std::string read_file(const std::string& path);
nlohmann::json read_json_file(const std::string& path);

/// Writes to a sibling temporary and renames it over `path`.
void write_file_atomic(const std::string& path, std::string_view content);

std::uint64_t fnv1a64(std::string_view bytes) noexcept;
std::string hex64(std::uint64_t v);

}  // namespace fpsa
