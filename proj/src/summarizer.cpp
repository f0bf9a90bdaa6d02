#include "sublabel/summarizer.hpp"

#include <algorithm>
#include <array>

#include "text_util.hpp"

namespace sublabel {

namespace {

constexpr std::size_t kMinWords = 2;
constexpr std::size_t kMaxWords = 8;
constexpr std::size_t kTrailingWords = 2;

constexpr std::array<std::string_view, 51> kStopWords = {
    "a",     "an",    "the",  "and",   "or",    "but",  "so",    "to",    "of",    "in",
    "on",    "at",    "for",  "with",  "from",  "by",   "as",    "is",    "are",   "was",
    "be",    "it",    "its",  "this",  "that",  "these", "those", "you",  "your",  "i",
    "my",    "we",    "our",  "they",  "their", "he",   "she",   "his",   "her",   "just",
    "very",  "really", "then", "there", "if",    "do",   "don't", "into",
    "onto",  "toward", "towards"};

bool any_body_part(const Match& m, std::span<const std::string> words, const Lexicon& lex) {
  return lex.body_parts.find(words.subspan(m.first, m.length())) >= 0;
}

// Shrinks [begin, end) by stop words at either edge without crossing the
// protected range [keep_begin, keep_end).
void trim_stop_words(std::span<const std::string> words, std::size_t& begin, std::size_t& end,
                     std::size_t keep_begin, std::size_t keep_end) {
  while (begin < keep_begin && is_stop_word(words[begin])) ++begin;
  while (end > keep_end && is_stop_word(words[end - 1])) --end;
}

SummaryPhrase make_phrase(std::span<const std::string> words, std::size_t begin,
                          std::size_t end, SummaryMethod method) {
  SummaryPhrase p;
  p.begin = begin;
  p.end = end;
  p.method = method;
  for (std::size_t i = begin; i < end; ++i) {
    if (i > begin) p.text.push_back(' ');
    p.text += words[i];
  }
  return p;
}

}  // namespace

bool is_stop_word(const std::string& word) {
  return std::find(kStopWords.begin(), kStopWords.end(), word) != kStopWords.end();
}

bool is_verb_like(const std::string& word, const std::vector<std::string>& verbs) {
  if (std::find(verbs.begin(), verbs.end(), word) != verbs.end()) return true;
  return word.size() >= 5 && word.ends_with("ing");
}

std::optional<Dependency> ProximityDependencies::find(std::span<const std::string> words,
                                                      const Lexicon& lexicon) const {
  for (const Match& m : match_spans(words, lexicon.fine_kw, lexicon.fine_akw)) {
    if (!any_body_part(m, words, lexicon)) continue;
    const std::size_t lo = m.first >= window_ ? m.first - window_ : 0;
    for (std::size_t p = m.first; p-- > lo;)
      if (is_verb_like(words[p], lexicon.verbs)) return Dependency{p, m};
  }
  return std::nullopt;
}

std::optional<SummaryPhrase> summarize(std::span<const std::string> words, const Lexicon& lexicon,
                                       const DependencyProvider& dependencies) {
  if (auto dep = dependencies.find(words, lexicon)) {
    std::size_t begin = dep->verb;
    std::size_t end = std::min(words.size(), dep->body_part.last + 1 + kTrailingWords);
    trim_stop_words(words, begin, end, dep->verb, dep->body_part.last + 1);
    end = std::min(end, begin + kMaxWords);
    if (end - begin >= kMinWords) return make_phrase(words, begin, end, SummaryMethod::Dependency);
  }

  const auto matches = match_spans(words, lexicon.fine_kw, lexicon.fine_akw);
  if (matches.empty()) return std::nullopt;
  auto anchor = std::find_if(matches.begin(), matches.end(),
                             [&](const Match& m) { return any_body_part(m, words, lexicon); });
  const Match& kw = anchor != matches.end() ? *anchor : matches.front();

  const auto k = static_cast<std::size_t>(lexicon.k);
  std::size_t begin = kw.first >= k ? kw.first - k : 0;
  std::size_t end = std::min(words.size(), kw.last + 1 + k);
  const std::size_t wide_begin = begin;
  const std::size_t wide_end = end;
  trim_stop_words(words, begin, end, kw.first, kw.last + 1);
  if (end - begin < kMinWords) {
    begin = wide_begin;
    end = wide_end;
  }
  // Shrink toward the keyword, right side first.
  while (end - begin > kMaxWords) {
    if (end > kw.last + 1 && end - (kw.last + 1) >= kw.first - begin)
      --end;
    else
      ++begin;
  }
  if (end - begin < kMinWords) return std::nullopt;
  return make_phrase(words, begin, end, SummaryMethod::KeywordContext);
}

std::optional<SummaryPhrase> summarize(std::span<const std::string> words, const Lexicon& lexicon) {
  return summarize(words, lexicon, ProximityDependencies{});
}

void summarize_incorrect(std::vector<Sentence>& sentences, const Lexicon& lexicon) {
  const ProximityDependencies deps;
  for (Sentence& s : sentences) {
    if (s.relevance == Relevance::Relevant && s.correctness == Correctness::Incorrect)
      s.summary = summarize(s.words, lexicon, deps);
    else
      s.summary.reset();
  }
}

}  // namespace sublabel
