#include "sublabel/subtitle.hpp"

#include <algorithm>
#include <cctype>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "sublabel/error.hpp"
#include "text_util.hpp"

namespace sublabel {

namespace {

struct RawCue {
  std::int64_t start_ms;
  std::int64_t end_ms;
  std::vector<std::string> lines;
};

std::vector<std::string> split_lines(std::string_view doc) {
  if (doc.size() >= 3 && doc.substr(0, 3) == "\xEF\xBB\xBF") doc.remove_prefix(3);
  std::vector<std::string> lines;
  std::string current;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    char c = doc[i];
    if (c == '\r') {
      if (i + 1 < doc.size() && doc[i + 1] == '\n') ++i;
      lines.push_back(std::move(current));
      current.clear();
    } else if (c == '\n') {
      lines.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  if (!current.empty()) lines.push_back(std::move(current));
  return lines;
}

bool is_blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(),
                     [](unsigned char c) { return std::isspace(c); });
}

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isdigit(c);
  });
}

// [HH:]MM:SS(,|.)fff
std::int64_t parse_timestamp(std::string_view ts, std::size_t line_no) {
  auto fail = [&]() -> std::int64_t {
    throw ParseError("malformed timestamp '" + std::string(ts) + "'", line_no);
  };
  std::size_t sep = ts.find_last_of(",.");
  if (sep == std::string_view::npos) return fail();
  std::string_view clock = ts.substr(0, sep);
  std::string_view frac = ts.substr(sep + 1);
  if (frac.empty() || frac.size() > 3 || !all_digits(frac)) return fail();

  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (true) {
    std::size_t colon = clock.find(':', pos);
    fields.push_back(clock.substr(pos, colon == std::string_view::npos
                                           ? std::string_view::npos
                                           : colon - pos));
    if (colon == std::string_view::npos) break;
    pos = colon + 1;
  }
  if (fields.size() < 2 || fields.size() > 3) return fail();
  for (auto f : fields)
    if (!all_digits(f) || f.size() > 9) return fail();

  std::int64_t hours = 0;
  std::size_t first = 0;
  if (fields.size() == 3) {
    hours = std::stoll(std::string(fields[0]));
    first = 1;
  }
  std::int64_t minutes = std::stoll(std::string(fields[first]));
  std::int64_t seconds = std::stoll(std::string(fields[first + 1]));
  if (minutes >= 60 || seconds >= 60 || fields[first + 1].size() != 2) return fail();

  std::int64_t millis = std::stoll(std::string(frac));
  for (std::size_t i = frac.size(); i < 3; ++i) millis *= 10;
  return ((hours * 60 + minutes) * 60 + seconds) * 1000 + millis;
}

std::pair<std::int64_t, std::int64_t> parse_timing_line(std::string_view line,
                                                        std::size_t line_no) {
  std::size_t arrow = line.find("-->");
  auto trim = [](std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
  };
  std::string_view left = trim(line.substr(0, arrow));
  std::string_view right = trim(line.substr(arrow + 3));
  // Cue settings (WebVTT) or coordinates (SRT) may follow the end time.
  std::size_t ws = right.find_first_of(" \t");
  if (ws != std::string_view::npos) right = right.substr(0, ws);
  std::int64_t start = parse_timestamp(left, line_no);
  std::int64_t end = parse_timestamp(right, line_no);
  if (end < start) throw ParseError("cue ends before it starts", line_no);
  return {start, end};
}

std::string decode_entities(std::string s) {
  static const std::pair<std::string_view, std::string_view> kEntities[] = {
      {"&amp;", "&"}, {"&lt;", "<"}, {"&gt;", ">"}, {"&nbsp;", " "},
      {"&quot;", "\""}, {"&#39;", "'"}, {"&apos;", "'"}};
  for (auto [from, to] : kEntities) {
    std::size_t pos = 0;
    while ((pos = s.find(from, pos)) != std::string::npos) {
      s.replace(pos, from.size(), to);
      pos += to.size();
    }
  }
  return s;
}

// Drops <...> markup and {...} override blocks, collapses whitespace.
std::string clean_line(std::string_view line) {
  std::string out;
  int angle = 0;
  int brace = 0;
  for (char c : line) {
    if (c == '<') { ++angle; continue; }
    if (c == '>' && angle > 0) { --angle; continue; }
    if (c == '{') { ++brace; continue; }
    if (c == '}' && brace > 0) { --brace; continue; }
    if (angle == 0 && brace == 0) out.push_back(c);
  }
  return detail::collapse_whitespace(decode_entities(std::move(out)));
}

bool is_vtt_metadata_block(std::string_view first_line) {
  for (std::string_view kw : {"WEBVTT", "NOTE", "STYLE", "REGION"}) {
    if (first_line.substr(0, kw.size()) == kw &&
        (first_line.size() == kw.size() ||
         std::isspace(static_cast<unsigned char>(first_line[kw.size()]))))
      return true;
  }
  return false;
}

}  // namespace

SubtitleFormat parse_format(std::string_view tag, std::string_view document) {
  if (tag == "srt") return SubtitleFormat::Srt;
  if (tag == "vtt") return SubtitleFormat::Vtt;
  if (tag == "auto") {
    std::string_view head = document;
    if (head.substr(0, 3) == "\xEF\xBB\xBF") head.remove_prefix(3);
    return head.substr(0, 6) == "WEBVTT" ? SubtitleFormat::Vtt : SubtitleFormat::Srt;
  }
  throw UsageError("unknown subtitle format '" + std::string(tag) +
                   "' (expected srt, vtt or auto)");
}

const char* format_name(SubtitleFormat format) {
  return format == SubtitleFormat::Srt ? "srt" : "vtt";
}

std::vector<Cue> parse_subtitles(std::string_view document, SubtitleFormat format) {
  const auto lines = split_lines(document);
  std::vector<RawCue> raw;

  std::size_t i = 0;
  while (i < lines.size()) {
    if (is_blank(lines[i])) { ++i; continue; }
    std::size_t block_start = i;
    std::size_t block_end = i;
    while (block_end < lines.size() && !is_blank(lines[block_end])) ++block_end;
    i = block_end;

    if (format == SubtitleFormat::Vtt && is_vtt_metadata_block(lines[block_start]))
      continue;

    // The timing line is first, or second after an index / cue identifier.
    std::size_t timing = block_start;
    if (lines[timing].find("-->") == std::string::npos) {
      if (format == SubtitleFormat::Srt && !all_digits(detail::trim(lines[timing])))
        throw ParseError("expected cue number or timing line", timing + 1);
      ++timing;
    }
    if (timing >= block_end || lines[timing].find("-->") == std::string::npos)
      throw ParseError("missing timing line", std::min(timing, block_end - 1) + 1);

    auto [start, end] = parse_timing_line(lines[timing], timing + 1);
    RawCue cue{start, end, {}};
    for (std::size_t l = timing + 1; l < block_end; ++l) {
      std::string cleaned = clean_line(lines[l]);
      if (!cleaned.empty()) cue.lines.push_back(std::move(cleaned));
    }
    raw.push_back(std::move(cue));
  }

  std::stable_sort(raw.begin(), raw.end(), [](const RawCue& a, const RawCue& b) {
    return a.start_ms < b.start_ms;
  });

  std::vector<Cue> cues;
  const std::vector<std::string>* previous = nullptr;
  for (const RawCue& rc : raw) {
    std::string text;
    for (const std::string& line : rc.lines) {
      if (previous &&
          std::find(previous->begin(), previous->end(), line) != previous->end())
        continue;
      if (!text.empty()) text.push_back(' ');
      text += line;
    }
    previous = &rc.lines;
    if (text.empty() || rc.end_ms == rc.start_ms) continue;
    cues.push_back(Cue{cues.size(), rc.start_ms, rc.end_ms, std::move(text)});
  }
  return cues;
}

std::vector<std::string> normalize_words(std::string_view text) {
  std::vector<std::string> words;
  for (std::string& raw : detail::split_whitespace(text)) {
    std::string w = detail::strip_edge_punct(detail::to_lower(raw));
    if (!w.empty()) words.push_back(std::move(w));
  }
  return words;
}

TokenStream tokenize(const std::vector<Cue>& cues) {
  TokenStream tokens;
  for (const Cue& cue : cues) {
    std::vector<std::pair<std::string, bool>> words;
    for (std::string& raw : detail::split_whitespace(cue.text)) {
      std::string w = detail::strip_edge_punct(detail::to_lower(raw));
      if (w.empty()) {
        // A detached "." still closes the previous word's sentence.
        if (!words.empty() && detail::ends_sentence(raw)) words.back().second = true;
        continue;
      }
      words.emplace_back(std::move(w), detail::ends_sentence(raw));
    }
    const auto n = static_cast<std::int64_t>(words.size());
    const std::int64_t duration = cue.end_ms - cue.start_ms;
    for (std::int64_t j = 0; j < n; ++j) {
      Token t;
      t.text = std::move(words[j].first);
      t.start_ms = cue.start_ms + j * duration / n;
      t.end_ms = cue.start_ms + (j + 1) * duration / n;
      t.index = tokens.size();
      t.sentence_final = words[j].second;
      tokens.push_back(std::move(t));
    }
  }
  return tokens;
}

void write_tokens_jsonl(std::ostream& out, const TokenStream& tokens) {
  for (const Token& t : tokens) {
    nlohmann::ordered_json j;
    j["text"] = t.text;
    j["start_ms"] = t.start_ms;
    j["end_ms"] = t.end_ms;
    j["index"] = t.index;
    if (t.sentence_final) j["eos"] = true;
    out << j.dump() << '\n';
  }
}

TokenStream read_tokens_jsonl(std::istream& in) {
  TokenStream tokens;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    try {
      auto j = nlohmann::json::parse(line);
      Token t;
      t.text = j.at("text").get<std::string>();
      t.start_ms = j.at("start_ms").get<std::int64_t>();
      t.end_ms = j.at("end_ms").get<std::int64_t>();
      t.index = j.at("index").get<std::size_t>();
      t.sentence_final = j.value("eos", false);
      tokens.push_back(std::move(t));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("bad token record: ") + e.what(), line_no);
    }
  }
  return tokens;
}

}  // namespace sublabel
