#include "sublabel/clips.hpp"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "sublabel/error.hpp"
#include "sublabel/pose.hpp"
#include "text_util.hpp"

namespace sublabel {

const char* clip_label_name(ClipLabel label) {
  switch (label) {
    case ClipLabel::RelevantCorrect: return "relevant_correct";
    case ClipLabel::RelevantIncorrect: return "relevant_incorrect";
    default: return "irrelevant";
  }
}

ClipLabel parse_clip_label(std::string_view name) {
  for (ClipLabel l : kClipLabels)
    if (name == clip_label_name(l)) return l;
  throw ParseError("unknown clip label '" + std::string(name) + "'");
}

ClipLabel sentence_clip_label(const Sentence& s) {
  if (s.relevance != Relevance::Relevant) return ClipLabel::Irrelevant;
  return s.correctness == Correctness::Incorrect ? ClipLabel::RelevantIncorrect
                                                 : ClipLabel::RelevantCorrect;
}

ClipBuildResult build_clips(const std::string& video_id, const std::vector<Sentence>& sentences,
                            double fps, std::int64_t total_frames, const ClipOptions& options) {
  if (total_frames < 0) throw ValidationError("total_frames must be >= 0");
  if (options.merge_gap < 0) throw ValidationError("merge_gap must be >= 0");
  if (!(fps > 0.0)) throw ValidationError("fps must be positive");

  ClipBuildResult result;
  std::vector<const Sentence*> ordered;
  for (const Sentence& s : sentences) ordered.push_back(&s);
  std::stable_sort(ordered.begin(), ordered.end(), [](const Sentence* a, const Sentence* b) {
    return a->start_ms < b->start_ms;
  });

  std::vector<ClipRecord> pieces;
  std::int64_t covered = 0;
  for (const Sentence* s : ordered) {
    FrameRange r = time_to_frames(s->start_ms, s->end_ms, fps);
    if (r.end > total_frames) {
      result.warnings.push_back("sentence " + std::to_string(s->id) + " ends at frame " +
                                std::to_string(r.end) + ", clamped to " +
                                std::to_string(total_frames));
      r.end = total_frames;
    }
    r.begin = std::max<std::int64_t>(r.begin, 0);
    if (r.begin < covered) {
      if (r.end > covered)
        result.warnings.push_back("sentence " + std::to_string(s->id) +
                                  " overlaps the previous sentence; trimmed");
      r.begin = covered;
    }
    if (r.empty()) continue;

    const ClipLabel label = sentence_clip_label(*s);
    std::optional<std::string> summary;
    if (label == ClipLabel::RelevantIncorrect && s->summary) summary = s->summary->text;

    if (!pieces.empty() && pieces.back().label == label &&
        r.begin - pieces.back().frame_end <= options.merge_gap) {
      ClipRecord& last = pieces.back();
      last.frame_end = r.end;
      last.source_sentence_ids.push_back(s->id);
      if (!last.summary) last.summary = std::move(summary);
    } else {
      pieces.push_back(ClipRecord{"", video_id, label, r.begin, r.end, {s->id}, std::move(summary)});
    }
    covered = r.end;
  }

  std::vector<ClipRecord> clips;
  auto append = [&](ClipRecord clip) {
    if (!clips.empty() && clips.back().label == clip.label &&
        clips.back().frame_end == clip.frame_start) {
      ClipRecord& last = clips.back();
      last.frame_end = clip.frame_end;
      last.source_sentence_ids.insert(last.source_sentence_ids.end(),
                                      clip.source_sentence_ids.begin(),
                                      clip.source_sentence_ids.end());
      if (!last.summary) last.summary = std::move(clip.summary);
    } else {
      clips.push_back(std::move(clip));
    }
  };
  std::int64_t cursor = 0;
  for (ClipRecord& piece : pieces) {
    if (piece.frame_start > cursor)
      append(ClipRecord{"", video_id, ClipLabel::Irrelevant, cursor, piece.frame_start, {}, {}});
    cursor = piece.frame_end;
    append(std::move(piece));
  }
  if (cursor < total_frames)
    append(ClipRecord{"", video_id, ClipLabel::Irrelevant, cursor, total_frames, {}, {}});

  for (std::size_t i = 0; i < clips.size(); ++i) {
    char suffix[32];
    std::snprintf(suffix, sizeof suffix, "_%04zu", i);
    clips[i].clip_id = video_id + suffix;
  }
  result.clips = std::move(clips);
  return result;
}

DatasetSummary summarize_dataset(std::span<const ClipRecord> clips) {
  DatasetSummary summary;
  std::array<double, 3> totals{};
  for (const ClipRecord& c : clips) {
    auto i = static_cast<std::size_t>(c.label);
    ++summary.per_label[i].count;
    totals[i] += static_cast<double>(c.length_frames());
  }
  for (std::size_t i = 0; i < 3; ++i)
    if (summary.per_label[i].count > 0)
      summary.per_label[i].mean_length =
          totals[i] / static_cast<double>(summary.per_label[i].count);
  return summary;
}

void write_manifest_jsonl(std::ostream& out, std::span<const ClipRecord> clips) {
  for (const ClipRecord& c : clips) {
    nlohmann::ordered_json j;
    j["clip_id"] = c.clip_id;
    j["video_id"] = c.video_id;
    j["label"] = clip_label_name(c.label);
    j["frame_start"] = c.frame_start;
    j["frame_end"] = c.frame_end;
    j["length_frames"] = c.length_frames();
    j["source_sentence_ids"] = c.source_sentence_ids;
    j["summary"] = c.summary ? nlohmann::ordered_json(*c.summary) : nlohmann::ordered_json();
    out << j.dump() << '\n';
  }
}

std::vector<ClipRecord> read_manifest_jsonl(std::istream& in) {
  std::vector<ClipRecord> clips;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    try {
      auto j = nlohmann::json::parse(line);
      ClipRecord c;
      c.clip_id = j.at("clip_id").get<std::string>();
      c.video_id = j.at("video_id").get<std::string>();
      c.label = parse_clip_label(j.at("label").get<std::string>());
      c.frame_start = j.at("frame_start").get<std::int64_t>();
      c.frame_end = j.at("frame_end").get<std::int64_t>();
      if (c.frame_end <= c.frame_start)
        throw ParseError("clip " + c.clip_id + " has an empty frame range", line_no);
      if (j.contains("source_sentence_ids"))
        c.source_sentence_ids = j["source_sentence_ids"].get<std::vector<std::size_t>>();
      if (j.contains("summary") && !j["summary"].is_null())
        c.summary = j["summary"].get<std::string>();
      clips.push_back(std::move(c));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("bad manifest record: ") + e.what(), line_no);
    }
  }
  return clips;
}

void write_dataset_summary_csv(std::ostream& out, const DatasetSummary& summary) {
  out << "label,count,mean_length_frames\n";
  for (ClipLabel l : kClipLabels) {
    char mean[64];
    std::snprintf(mean, sizeof mean, "%.3f", summary[l].mean_length);
    out << clip_label_name(l) << ',' << summary[l].count << ',' << mean << '\n';
  }
}

}  // namespace sublabel
