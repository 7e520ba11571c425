#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "fpsa/encoding.hpp"

namespace fpsa {

enum class Task { digits, xdu, nju };

std::string_view to_string(Task t) noexcept;
Task task_from_string(std::string_view s);

/// Built-in glyph by label: "1".."4" (5x4), "X","D","U","N","J" (5x5).
PixelPattern glyph(std::string_view label);

/// Patterns of a task in target order: pattern k should fire logical POST k.
std::vector<PixelPattern> task_patterns(Task t);

/// Default windows: 15 ns + 1 ns guard for the 5x4 digits, 18 ns + 1 ns for 5x5 letters.
WindowSpec task_windows(Task t);

}  // namespace fpsa
