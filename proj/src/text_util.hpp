#pragma once

#include <algorithm>
#include <cctype>
#include <string>
#include <string_view>
#include <vector>

namespace sublabel::detail {

inline bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

// ASCII punctuation only; UTF-8 continuation bytes are left alone.
inline bool is_punct(char c) { return std::ispunct(static_cast<unsigned char>(c)) != 0; }

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

inline std::string to_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return out;
}

inline std::vector<std::string> split_whitespace(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && is_space(s[i])) ++i;
    std::size_t j = i;
    while (j < s.size() && !is_space(s[j])) ++j;
    if (j > i) out.emplace_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

inline std::string collapse_whitespace(std::string_view s) {
  std::string out;
  for (const std::string& w : split_whitespace(s)) {
    if (!out.empty()) out.push_back(' ');
    out += w;
  }
  return out;
}

inline std::string strip_edge_punct(std::string_view s) {
  while (!s.empty() && is_punct(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_punct(s.back())) s.remove_suffix(1);
  return std::string(s);
}

// True when the raw word ends a sentence: trailing . ! ? (possibly followed
// by closing quotes or brackets).
inline bool ends_sentence(std::string_view raw) {
  while (!raw.empty() && (raw.back() == '"' || raw.back() == '\'' ||
                          raw.back() == ')' || raw.back() == ']'))
    raw.remove_suffix(1);
  return !raw.empty() && (raw.back() == '.' || raw.back() == '!' || raw.back() == '?');
}

inline std::string join(const std::vector<std::string>& words, std::size_t begin,
                        std::size_t end) {
  std::string out;
  for (std::size_t i = begin; i < end; ++i) {
    if (i > begin) out.push_back(' ');
    out += words[i];
  }
  return out;
}

inline std::string join(const std::vector<std::string>& words) {
  return join(words, 0, words.size());
}

}  // namespace sublabel::detail
