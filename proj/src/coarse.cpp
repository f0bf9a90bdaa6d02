#include "sublabel/coarse.hpp"

#include <istream>
#include <ostream>

#include <json.hpp>

#include "sublabel/error.hpp"

namespace sublabel {

const char* coarse_label_name(CoarseLabel label) {
  return label == CoarseLabel::Kept ? "kept" : "rejected";
}

std::vector<CoarseSpan> mark_coarse(const TokenStream& tokens, const Lexicon& lexicon) {
  const auto words = token_words(tokens);
  const auto akw = match_spans(words, lexicon.coarse_akw, lexicon.coarse_kw);
  const auto kw = match_spans(words, lexicon.coarse_kw, lexicon.coarse_akw);

  std::vector<bool> akw_start(words.size(), false);
  std::vector<bool> kw_start(words.size(), false);
  for (const auto& m : akw) akw_start[m.first] = true;
  for (const auto& m : kw) kw_start[m.first] = true;

  std::vector<CoarseSpan> spans;
  auto emit = [&](std::size_t i, CoarseLabel label) {
    if (!spans.empty() && spans.back().label == label)
      spans.back().end = i + 1;
    else
      spans.push_back(CoarseSpan{i, i + 1, label});
  };

  bool rejecting = false;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (rejecting && kw_start[i])
      rejecting = false;
    else if (!rejecting && akw_start[i])
      rejecting = true;
    emit(i, rejecting ? CoarseLabel::Rejected : CoarseLabel::Kept);
  }
  return spans;
}

void write_spans_json(std::ostream& out, const std::vector<CoarseSpan>& spans,
                      const TokenStream& tokens) {
  nlohmann::ordered_json doc;
  doc["spans"] = nlohmann::ordered_json::array();
  for (const auto& s : spans) {
    nlohmann::ordered_json j;
    j["start_index"] = s.begin;
    j["end_index"] = s.end;
    j["label"] = coarse_label_name(s.label);
    doc["spans"].push_back(std::move(j));
  }
  doc["tokens"] = nlohmann::ordered_json::array();
  for (const auto& t : tokens) {
    nlohmann::ordered_json j;
    j["text"] = t.text;
    j["start_ms"] = t.start_ms;
    j["end_ms"] = t.end_ms;
    j["index"] = t.index;
    if (t.sentence_final) j["eos"] = true;
    doc["tokens"].push_back(std::move(j));
  }
  out << doc.dump(1) << '\n';
}

std::vector<CoarseSpan> read_spans_json(std::istream& in, TokenStream* tokens) {
  std::vector<CoarseSpan> spans;
  try {
    auto doc = nlohmann::json::parse(in);
    for (const auto& j : doc.at("spans")) {
      CoarseSpan s;
      s.begin = j.at("start_index").get<std::size_t>();
      s.end = j.at("end_index").get<std::size_t>();
      const auto label = j.at("label").get<std::string>();
      if (label == "kept")
        s.label = CoarseLabel::Kept;
      else if (label == "rejected")
        s.label = CoarseLabel::Rejected;
      else
        throw ParseError("unknown span label '" + label + "'");
      spans.push_back(s);
    }
    if (tokens) {
      tokens->clear();
      for (const auto& j : doc.at("tokens")) {
        Token t;
        t.text = j.at("text").get<std::string>();
        t.start_ms = j.at("start_ms").get<std::int64_t>();
        t.end_ms = j.at("end_ms").get<std::int64_t>();
        t.index = j.at("index").get<std::size_t>();
        t.sentence_final = j.value("eos", false);
        tokens->push_back(std::move(t));
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad spans file: ") + e.what());
  }
  return spans;
}

}  // namespace sublabel
