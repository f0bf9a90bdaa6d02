#include "sublabel/sentence.hpp"

#include <algorithm>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "sublabel/error.hpp"
#include "text_util.hpp"

namespace sublabel {

const char* relevance_name(Relevance r) {
  switch (r) {
    case Relevance::Relevant: return "relevant";
    case Relevance::Irrelevant: return "irrelevant";
    default: return "unset";
  }
}

const char* correctness_name(Correctness c) {
  switch (c) {
    case Correctness::Correct: return "correct";
    case Correctness::Incorrect: return "incorrect";
    default: return "unset";
  }
}

const char* gate_name(GateStatus g) {
  switch (g) {
    case GateStatus::Pass: return "pass";
    case GateStatus::Fail: return "fail";
    case GateStatus::NoPoseData: return "no-pose-data";
    default: return "not-run";
  }
}

const char* summary_method_name(SummaryMethod m) {
  return m == SummaryMethod::Dependency ? "dependency" : "keyword_context";
}

std::string Sentence::text() const { return detail::join(words); }

std::size_t Sentence::char_len() const {
  std::size_t n = 0;
  for (const auto& w : words)
    for (unsigned char c : w)
      if ((c & 0xC0) != 0x80) ++n;
  return n + (words.empty() ? 0 : words.size() - 1);
}

std::vector<std::size_t> RuleSegmenter::boundaries(std::span<const Token> span) const {
  std::vector<std::size_t> cuts;
  if (span.size() < 2) return cuts;

  for (std::size_t j = 1; j < span.size(); ++j)
    if (span[j - 1].sentence_final) cuts.push_back(j);
  if (!cuts.empty()) return cuts;

  for (std::size_t j = 1; j < span.size(); ++j)
    if (span[j].start_ms - span[j - 1].end_ms > options_.pause_ms) cuts.push_back(j);
  if (!cuts.empty()) return cuts;

  for (std::size_t j = 1; j < span.size(); ++j)
    if (std::find(options_.markers.begin(), options_.markers.end(), span[j].text) !=
        options_.markers.end())
      cuts.push_back(j);
  return cuts;
}

std::size_t long_sentence_cut(std::span<const Token> span) {
  const std::size_t n = span.size();
  std::size_t best = 1;
  std::int64_t best_gap = 0;
  std::size_t best_dist = n;  // |2j - n|
  for (std::size_t j = 1; j < n; ++j) {
    std::int64_t gap = span[j].start_ms - span[j - 1].end_ms;
    std::size_t dist = 2 * j > n ? 2 * j - n : n - 2 * j;
    if (j == 1 || gap > best_gap || (gap == best_gap && dist < best_dist)) {
      best = j;
      best_gap = gap;
      best_dist = dist;
    }
  }
  return best;
}

namespace {

void split_long(std::span<const Token> piece, std::size_t offset, const SentenceLimits& limits,
                std::vector<std::pair<std::size_t, std::size_t>>& out) {
  if (piece.empty()) return;
  const std::int64_t display = piece.back().end_ms - piece.front().start_ms;
  if (piece.size() <= limits.max_words && display <= limits.max_display_ms) {
    out.emplace_back(offset, offset + piece.size());
    return;
  }
  if (piece.size() == 1) return;
  std::size_t cut = long_sentence_cut(piece);
  split_long(piece.first(cut), offset, limits, out);
  split_long(piece.subspan(cut), offset + cut, limits, out);
}

}  // namespace

std::vector<Sentence> split_sentences(const TokenStream& tokens,
                                      const std::vector<CoarseSpan>& spans,
                                      const Segmenter& segmenter,
                                      const SentenceLimits& limits) {
  std::vector<Sentence> sentences;
  const std::span<const Token> all(tokens);
  for (const CoarseSpan& span : spans) {
    if (span.label != CoarseLabel::Kept) continue;
    if (span.end > tokens.size() || span.begin > span.end)
      throw ValidationError("coarse span [" + std::to_string(span.begin) + ", " +
                            std::to_string(span.end) + ") lies outside the token stream");
    auto kept = all.subspan(span.begin, span.end - span.begin);

    auto cuts = segmenter.boundaries(kept);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    std::erase_if(cuts, [&](std::size_t c) { return c == 0 || c >= kept.size(); });
    cuts.push_back(kept.size());

    std::vector<std::pair<std::size_t, std::size_t>> pieces;
    std::size_t prev = 0;
    for (std::size_t cut : cuts) {
      split_long(kept.subspan(prev, cut - prev), span.begin + prev, limits, pieces);
      prev = cut;
    }

    for (auto [b, e] : pieces) {
      Sentence s;
      s.token_begin = b;
      s.token_end = e;
      for (std::size_t i = b; i < e; ++i) s.words.push_back(tokens[i].text);
      s.start_ms = tokens[b].start_ms;
      s.end_ms = tokens[e - 1].end_ms;
      if (s.char_len() < limits.min_chars) continue;
      s.id = sentences.size();
      sentences.push_back(std::move(s));
    }
  }
  return sentences;
}

void write_sentences_jsonl(std::ostream& out, const std::vector<Sentence>& sentences) {
  for (const Sentence& s : sentences) {
    nlohmann::ordered_json j;
    j["id"] = s.id;
    j["text"] = s.text();
    j["start_ms"] = s.start_ms;
    j["end_ms"] = s.end_ms;
    j["token_begin"] = s.token_begin;
    j["token_end"] = s.token_end;
    if (s.relevance != Relevance::Unset) j["relevance"] = relevance_name(s.relevance);
    if (s.gate != GateStatus::NotRun) j["gate"] = gate_name(s.gate);
    if (s.correctness != Correctness::Unset) j["correctness"] = correctness_name(s.correctness);
    if (s.log_odds) j["log_odds"] = *s.log_odds;
    if (s.summary) {
      nlohmann::ordered_json sum;
      sum["text"] = s.summary->text;
      sum["start"] = s.summary->begin;
      sum["end"] = s.summary->end;
      sum["method"] = summary_method_name(s.summary->method);
      j["summary"] = std::move(sum);
    }
    out << j.dump() << '\n';
  }
}

namespace {

template <typename Enum>
Enum parse_enum(const std::string& value, std::initializer_list<std::pair<const char*, Enum>> table,
                const char* field, std::size_t line_no) {
  for (const auto& [name, e] : table)
    if (value == name) return e;
  throw ParseError(std::string("unknown ") + field + " '" + value + "'", line_no);
}

}  // namespace

std::vector<Sentence> read_sentences_jsonl(std::istream& in) {
  std::vector<Sentence> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    try {
      auto j = nlohmann::json::parse(line);
      Sentence s;
      s.id = j.at("id").get<std::size_t>();
      s.words = detail::split_whitespace(j.at("text").get<std::string>());
      s.start_ms = j.at("start_ms").get<std::int64_t>();
      s.end_ms = j.at("end_ms").get<std::int64_t>();
      s.token_begin = j.value("token_begin", std::size_t{0});
      s.token_end = j.value("token_end", s.token_begin + s.words.size());
      if (j.contains("relevance"))
        s.relevance = parse_enum<Relevance>(
            j["relevance"].get<std::string>(),
            {{"relevant", Relevance::Relevant}, {"irrelevant", Relevance::Irrelevant}},
            "relevance", line_no);
      if (j.contains("gate"))
        s.gate = parse_enum<GateStatus>(j["gate"].get<std::string>(),
                                        {{"pass", GateStatus::Pass},
                                         {"fail", GateStatus::Fail},
                                         {"no-pose-data", GateStatus::NoPoseData}},
                                        "gate", line_no);
      if (j.contains("correctness"))
        s.correctness = parse_enum<Correctness>(
            j["correctness"].get<std::string>(),
            {{"correct", Correctness::Correct}, {"incorrect", Correctness::Incorrect}},
            "correctness", line_no);
      if (j.contains("log_odds")) s.log_odds = j["log_odds"].get<double>();
      if (j.contains("summary") && !j["summary"].is_null()) {
        const auto& sum = j["summary"];
        SummaryPhrase p;
        p.text = sum.at("text").get<std::string>();
        p.begin = sum.at("start").get<std::size_t>();
        p.end = sum.at("end").get<std::size_t>();
        p.method = parse_enum<SummaryMethod>(
            sum.at("method").get<std::string>(),
            {{"dependency", SummaryMethod::Dependency},
             {"keyword_context", SummaryMethod::KeywordContext}},
            "summary method", line_no);
        s.summary = std::move(p);
      }
      out.push_back(std::move(s));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("bad sentence record: ") + e.what(), line_no);
    }
  }
  return out;
}

}  // namespace sublabel
