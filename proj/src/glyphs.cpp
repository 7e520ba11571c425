#include "fpsa/glyphs.hpp"

#include <array>

#include "fpsa/errors.hpp"

namespace fpsa {

namespace {

struct GlyphRows {
  std::string_view label;
  std::array<std::string_view, 5> rows;
};

// Column intensities of "2" are fixed: [1,0,1,1,1], [1,0,1,0,1], [1,0,1,0,1], [1,1,1,0,1].
constexpr GlyphRows kGlyphs[] = {
    {"1", {"0010", "0110", "0010", "0010", "0111"}},
    {"2", {"1111", "0001", "1111", "1000", "1111"}},
    {"3", {"0110", "1001", "0010", "1001", "0110"}},
    {"4", {"0011", "0101", "1001", "1111", "0001"}},
    {"X", {"10001", "01010", "00100", "01010", "10001"}},
    {"D", {"11100", "10010", "10001", "10010", "11100"}},
    {"U", {"10001", "10001", "10001", "10001", "01110"}},
    {"N", {"10001", "11001", "10101", "10011", "10001"}},
    {"J", {"00111", "00010", "00010", "10010", "01100"}},
};

}  // namespace

std::string_view to_string(Task t) noexcept {
  switch (t) {
    case Task::digits: return "digits";
    case Task::xdu: return "xdu";
    case Task::nju: return "nju";
  }
  return "unknown";
}

Task task_from_string(std::string_view s) {
  if (s == "digits") return Task::digits;
  if (s == "xdu") return Task::xdu;
  if (s == "nju") return Task::nju;
  throw ConfigError("unknown task '" + std::string(s) + "' (expected digits, xdu or nju)");
}

PixelPattern glyph(std::string_view label) {
  for (const auto& g : kGlyphs) {
    if (g.label != label) continue;
    PixelPattern p;
    p.label = std::string(label);
    p.rows = g.rows.size();
    p.cols = g.rows[0].size();
    for (auto row : g.rows) {
      for (char c : row) p.pixels.push_back(c == '1' ? 1 : 0);
    }
    return p;
  }
  throw ConfigError("no built-in glyph '" + std::string(label) + "'");
}

std::vector<PixelPattern> task_patterns(Task t) {
  switch (t) {
    case Task::digits: return {glyph("1"), glyph("2"), glyph("3"), glyph("4")};
    case Task::xdu: return {glyph("X"), glyph("D"), glyph("U")};
    case Task::nju: return {glyph("N"), glyph("J"), glyph("U")};
  }
  throw ContractError("unhandled task");
}

WindowSpec task_windows(Task t) {
  if (t == Task::digits) return {4, 15.0, 1.0};
  return {3, 18.0, 1.0};
}

}  // namespace fpsa
