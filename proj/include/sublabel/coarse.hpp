#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "sublabel/lexicon.hpp"
#include "sublabel/subtitle.hpp"

namespace sublabel {

enum class CoarseLabel { Kept, Rejected };

const char* coarse_label_name(CoarseLabel label);

/// Half-open token range [begin, end).
struct CoarseSpan {
  std::size_t begin = 0;
  std::size_t end = 0;
  CoarseLabel label = CoarseLabel::Kept;

  bool operator==(const CoarseSpan&) const = default;
};

/// First-pass rejection. From the first token of a coarse anti-keyword match
/// everything is rejected up to (not including) the first token of the next
/// coarse keyword match, or to the end of the stream. Spans partition the
/// stream; adjacent spans never share a label. An empty stream yields no
/// spans.
std::vector<CoarseSpan> mark_coarse(const TokenStream& tokens, const Lexicon& lexicon);

/// spans.json: {"spans": [{"start_index","end_index","label"}...], "tokens": [...]}.
/// Tokens are embedded so the file is the only input the sentence stage needs.
void write_spans_json(std::ostream& out, const std::vector<CoarseSpan>& spans,
                      const TokenStream& tokens);
std::vector<CoarseSpan> read_spans_json(std::istream& in, TokenStream* tokens);

}  // namespace sublabel
