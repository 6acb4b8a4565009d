#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace publist::text {

/// Lowercases and folds diacritics (canonical decomposition, combining marks
/// removed). Pure ASCII input takes a fast path that never touches ICU.
std::string fold_lower(std::string_view s);

/// Splits folded text into maximal runs of letters and digits.
std::vector<std::string> alnum_tokens(std::string_view folded);

/// Splits text into maximal runs of letters only (digits and marks break runs).
std::vector<std::string> alpha_tokens(std::string_view folded);

std::u32string to_code_points(std::string_view utf8);
std::string from_code_point(char32_t cp);

/// First code point of a UTF-8 string, re-encoded; empty input gives "".
std::string first_code_point(std::string_view utf8);
std::size_t code_point_count(std::string_view utf8);

std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t v);

std::string_view trim(std::string_view s);
std::string collapse_whitespace(std::string_view s);
std::vector<std::string> split(std::string_view s, std::string_view sep);
std::string join(const std::vector<std::string>& parts, std::string_view sep);

bool is_ascii(std::string_view s);

}  // namespace publist::text
