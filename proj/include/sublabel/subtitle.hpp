#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace sublabel {

enum class SubtitleFormat { Srt, Vtt };

/// Parses "srt", "vtt" or "auto". Throws UsageError on anything else.
/// "auto" sniffs the document: a leading WEBVTT signature selects Vtt.
SubtitleFormat parse_format(std::string_view tag, std::string_view document);
const char* format_name(SubtitleFormat format);

struct Cue {
  std::size_t index = 0;
  std::int64_t start_ms = 0;
  std::int64_t end_ms = 0;
  std::string text;

  bool operator==(const Cue&) const = default;
};

struct Token {
  std::string text;
  std::int64_t start_ms = 0;
  std::int64_t end_ms = 0;
  std::size_t index = 0;
  // Source word carried sentence-final punctuation (. ! ?) before it was
  // stripped. Consumed by the rule-based segmenter.
  bool sentence_final = false;

  bool operator==(const Token&) const = default;
};

using TokenStream = std::vector<Token>;

/// Parses an SRT or WebVTT document into cues ordered by start time.
///
/// Markup tags are removed and whitespace collapsed. Auto-caption roll-up
/// is undone: a line that repeats verbatim a line of the immediately
/// preceding cue is dropped, and a cue left without text is dropped.
/// Zero-length cues are dropped. Throws ParseError (with line number) on
/// malformed timestamps or an end time before the start time.
std::vector<Cue> parse_subtitles(std::string_view document, SubtitleFormat format);

/// Lowercases, splits on whitespace and strips punctuation from word edges.
/// Intra-word hyphens and apostrophes survive ("push-up", "don't").
std::vector<std::string> normalize_words(std::string_view text);

/// Splits every cue into tokens and spreads the cue interval evenly over
/// them: token j of n gets [start + j*d/n, start + (j+1)*d/n) in integer ms.
TokenStream tokenize(const std::vector<Cue>& cues);

// tokens.jsonl: one {"text","start_ms","end_ms","index"} object per line,
// plus "eos":true on sentence-final tokens.
void write_tokens_jsonl(std::ostream& out, const TokenStream& tokens);
TokenStream read_tokens_jsonl(std::istream& in);

}  // namespace sublabel
