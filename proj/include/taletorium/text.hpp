#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace taletorium::text {

std::string to_lower(std::string_view s);
std::string trim(std::string_view s);

/// Splits on any character in `delims`, dropping empty pieces.
std::vector<std::string> split(std::string_view s, std::string_view delims);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

/// Word characters: letters, digits, apostrophe, hyphen.
bool is_word_char(char c) noexcept;

/// Lowercased words of `s`, in order.
std::vector<std::string> words(std::string_view s);

/// True when `phrase` (space-separated words) occurs in `s` on word boundaries,
/// case-insensitively.
bool contains_phrase(std::string_view s, std::string_view phrase);

std::string read_file(const std::string& path);

/// Lines of a text file, with comment lines ('#') and blank lines removed.
std::vector<std::string> read_data_lines(const std::string& path);

}  // namespace taletorium::text
