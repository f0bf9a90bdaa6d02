#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sublabel/sentence.hpp"

namespace sublabel {

enum class ClipLabel : std::uint8_t { Irrelevant = 0, RelevantCorrect = 1, RelevantIncorrect = 2 };

inline constexpr std::array<ClipLabel, 3> kClipLabels = {
    ClipLabel::Irrelevant, ClipLabel::RelevantCorrect, ClipLabel::RelevantIncorrect};

const char* clip_label_name(ClipLabel label);
/// Throws ParseError on an unknown name.
ClipLabel parse_clip_label(std::string_view name);

/// Irrelevant unless relevant; a relevant sentence without a correctness
/// label counts as correct.
ClipLabel sentence_clip_label(const Sentence& sentence);

struct ClipRecord {
  std::string clip_id;
  std::string video_id;
  ClipLabel label = ClipLabel::Irrelevant;
  std::int64_t frame_start = 0;  // half-open
  std::int64_t frame_end = 0;
  std::vector<std::size_t> source_sentence_ids;
  std::optional<std::string> summary;

  std::int64_t length_frames() const { return frame_end - frame_start; }
  bool operator==(const ClipRecord&) const = default;
};

struct ClipOptions {
  std::int64_t merge_gap = 15;  // frames
};

struct ClipBuildResult {
  std::vector<ClipRecord> clips;
  std::vector<std::string> warnings;
};

/// Maps sentences to frame ranges, merges same-label neighbours separated by
/// at most `merge_gap` frames (a merged incorrect clip keeps its first
/// summary), and fills every uncovered frame with irrelevant clips. The
/// result partitions [0, total_frames). Ranges past the end are clamped and
/// reported in `warnings`.
ClipBuildResult build_clips(const std::string& video_id, const std::vector<Sentence>& sentences,
                            double fps, std::int64_t total_frames, const ClipOptions& options = {});

struct LabelStats {
  std::size_t count = 0;
  double mean_length = 0.0;

  bool operator==(const LabelStats&) const = default;
};

struct DatasetSummary {
  std::array<LabelStats, 3> per_label{};

  const LabelStats& operator[](ClipLabel label) const {
    return per_label[static_cast<std::size_t>(label)];
  }
  bool operator==(const DatasetSummary&) const = default;
};

DatasetSummary summarize_dataset(std::span<const ClipRecord> clips);

// manifest.jsonl: {"clip_id","video_id","label","frame_start","frame_end",
// "length_frames","source_sentence_ids","summary"} per line.
void write_manifest_jsonl(std::ostream& out, std::span<const ClipRecord> clips);
std::vector<ClipRecord> read_manifest_jsonl(std::istream& in);
/// Label, count, mean length as CSV.
void write_dataset_summary_csv(std::ostream& out, const DatasetSummary& summary);

}  // namespace sublabel
