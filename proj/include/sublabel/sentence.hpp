#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sublabel/coarse.hpp"
#include "sublabel/subtitle.hpp"

namespace sublabel {

enum class Relevance { Unset, Relevant, Irrelevant };
enum class Correctness { Unset, Correct, Incorrect };
enum class GateStatus { NotRun, Pass, Fail, NoPoseData };
enum class SummaryMethod { Dependency, KeywordContext };

const char* relevance_name(Relevance r);
const char* correctness_name(Correctness c);
const char* gate_name(GateStatus g);
const char* summary_method_name(SummaryMethod m);

/// Verbatim word span [begin, end) of a sentence naming an execution error.
struct SummaryPhrase {
  std::string text;
  std::size_t begin = 0;
  std::size_t end = 0;
  SummaryMethod method = SummaryMethod::KeywordContext;

  bool operator==(const SummaryPhrase&) const = default;
};

struct Sentence {
  std::size_t id = 0;
  std::vector<std::string> words;
  std::int64_t start_ms = 0;
  std::int64_t end_ms = 0;
  // Position in the video's token stream, [token_begin, token_end).
  std::size_t token_begin = 0;
  std::size_t token_end = 0;

  Relevance relevance = Relevance::Unset;
  GateStatus gate = GateStatus::NotRun;
  Correctness correctness = Correctness::Unset;
  std::optional<double> log_odds;
  std::optional<SummaryPhrase> summary;

  std::string text() const;
  /// UTF-8 character count of the space-joined text.
  std::size_t char_len() const;

  bool operator==(const Sentence&) const = default;
};

/// Proposes sentence boundaries inside one kept token span. Returned values
/// are cut positions relative to the span, strictly inside (0, size).
class Segmenter {
public:
  virtual ~Segmenter() = default;
  virtual std::vector<std::size_t> boundaries(std::span<const Token> span) const = 0;
};

/// Deterministic fallback chain: cut after sentence-final punctuation when the
/// span has any; otherwise at inter-token pauses longer than `pause_ms`;
/// otherwise before discourse markers that are not span-initial.
class RuleSegmenter : public Segmenter {
public:
  struct Options {
    std::int64_t pause_ms = 800;
    std::vector<std::string> markers{"so", "now", "okay", "alright"};
  };

  RuleSegmenter() = default;
  explicit RuleSegmenter(Options options) : options_(std::move(options)) {}

  std::vector<std::size_t> boundaries(std::span<const Token> span) const override;

private:
  Options options_;
};

struct SentenceLimits {
  std::size_t min_chars = 20;
  std::size_t max_words = 30;
  std::int64_t max_display_ms = 15000;
};

/// Largest inter-token gap, ties resolved toward the midpoint and then to
/// the left. `span.size()` must be at least 2.
std::size_t long_sentence_cut(std::span<const Token> span);

/// Splits kept spans into sentences. Over-long pieces are cut recursively at
/// long_sentence_cut until both caps hold; pieces under `min_chars` are
/// dropped, as is a single token that alone exceeds the display cap.
std::vector<Sentence> split_sentences(const TokenStream& tokens,
                                      const std::vector<CoarseSpan>& spans,
                                      const Segmenter& segmenter,
                                      const SentenceLimits& limits = {});

// sentences.jsonl / labeled.jsonl: one sentence per line. Label fields are
// written only once set.
void write_sentences_jsonl(std::ostream& out, const std::vector<Sentence>& sentences);
std::vector<Sentence> read_sentences_jsonl(std::istream& in);

}  // namespace sublabel
