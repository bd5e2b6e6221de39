#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace xdalign::text {

// ASCII whitespace plus U+00A0 (no-break space).
std::string_view trim(std::string_view s);

// Collapses runs of whitespace to one space and trims both ends.
std::string normalize_whitespace(std::string_view s);

// Removes every whitespace character.
std::string strip_whitespace(std::string_view s);

// Number of Unicode code points; malformed bytes count as one character each.
std::size_t char_count(std::string_view utf8);

// Decodes the code point starting at `pos` and advances `pos` past it.
char32_t next_code_point(std::string_view utf8, std::size_t& pos);

void append_utf8(std::string& out, char32_t cp);

// Lowercases ASCII and Latin-1 Supplement letters; other code points unchanged.
char32_t to_lower(char32_t cp);
bool is_lower_letter(char32_t cp);
bool is_space(char32_t cp);

std::string to_lower_utf8(std::string_view s);

// Fixed-point rendering used for every float written to JSONL/CSV.
std::string format_fixed(double value, int decimals);

}  // namespace xdalign::text
