#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "sublabel/subtitle.hpp"

namespace sublabel {

/// One template such as "triangle push(-)up(s)" and its expanded word
/// sequences. "(-)" expands to a hyphen-joined word and to two words; any
/// other "(x)" group is an optional literal ("(s)" plural).
struct PatternEntry {
  std::string surface;
  std::vector<std::vector<std::string>> variants;
};

/// Expands one template. Throws ConfigError on unbalanced parentheses or a
/// variant outside 1..4 words.
PatternEntry expand_template(std::string_view surface);

class PatternSet {
public:
  PatternSet() = default;
  PatternSet(std::string name, std::vector<PatternEntry> entries);

  const std::string& name() const { return name_; }
  const std::vector<PatternEntry>& entries() const { return entries_; }
  std::size_t variant_count() const { return lookup_.size(); }
  std::size_t max_words() const { return max_words_; }
  bool empty() const { return entries_.empty(); }

  /// Entry index for an exact word sequence, or -1.
  long find(std::span<const std::string> words) const;
  bool contains_word(std::string_view word) const;

private:
  std::string name_;
  std::vector<PatternEntry> entries_;
  std::unordered_map<std::string, std::size_t> lookup_;  // space-joined variant -> entry
  std::size_t max_words_ = 0;
};

/// Template lists as written in a lexicon file.
struct LexiconConfig {
  std::vector<std::string> coarse_kw;
  std::vector<std::string> coarse_akw;
  std::vector<std::string> fine_kw;
  std::vector<std::string> fine_akw;
  // Subset of fine_kw naming body parts; drives the summarizer.
  std::vector<std::string> body_parts;
  std::vector<std::string> verbs;
  int k = 3;
};

struct Lexicon {
  PatternSet coarse_kw;
  PatternSet coarse_akw;
  PatternSet fine_kw;
  PatternSet fine_akw;
  PatternSet body_parts;
  std::vector<std::string> verbs;
  int k = 3;
};

/// Expands every template. Throws ConfigError when one of the four sets is
/// empty, k < 1, a variant occurs in two different sets, or a body part is
/// not a fine keyword.
Lexicon compile(const LexiconConfig& config);

/// Lexicon files are JSON objects with arrays "coarse_kw", "coarse_akw",
/// "fine_kw", "fine_akw", optional "body_parts" and "verbs", and integer "k".
LexiconConfig parse_lexicon_config(std::string_view text);
Lexicon load_lexicon(const std::string& path);

/// Inclusive token range [first, last] matched by `entry` of a set.
struct Match {
  std::size_t first = 0;
  std::size_t last = 0;
  std::size_t entry = 0;

  std::size_t length() const { return last - first + 1; }
  bool operator==(const Match&) const = default;
};

/// Non-overlapping matches, scanning left to right and taking the longest
/// variant at each position.
std::vector<Match> match_spans(std::span<const std::string> words, const PatternSet& set);

/// As above, but a match strictly inside a longer match of `competing` is
/// suppressed ("push up" inside "triangle push up").
std::vector<Match> match_spans(std::span<const std::string> words, const PatternSet& set,
                               const PatternSet& competing);

std::vector<std::string> token_words(const TokenStream& tokens);

}  // namespace sublabel
