#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sublabel/analysis/cluster_report.hpp"
#include "sublabel/analysis/clustering.hpp"
#include "sublabel/clips.hpp"
#include "sublabel/relevance.hpp"
#include "sublabel/sentence.hpp"

namespace sublabel {

struct VideoInput {
  std::string id;
  std::string subtitles;
  std::string format = "auto";
  std::string poses;
  std::optional<double> fps;               // default: pose header, then config fps
  std::optional<std::int64_t> total_frames;  // default: pose stream extent
};

struct PipelineParameters {
  std::optional<int> k;  // overrides the lexicon's window size
  VisibilityGate gate;
  SentenceLimits limits;
  std::int64_t pause_ms = 800;
  std::int64_t merge_gap = 15;
  double alpha = 1.0;
  analysis::KMeansOptions kmeans;
  analysis::ClusterMode cluster_mode = analysis::ClusterMode::Both;
  double default_fps = 30.0;
  std::size_t workers = 1;
};

struct PipelineConfig {
  std::string lexicon;
  std::string corpus;  // trained on the fly when `model` is empty
  std::string model;
  std::string subtitle_dir;
  std::string pose_dir;
  std::string output_dir;
  std::vector<VideoInput> videos;
  PipelineParameters params;
};

/// Reads a JSON project file. Relative paths resolve against the file's
/// directory. Without an explicit "videos" list, every .srt/.vtt file in
/// subtitle_dir is paired with the .jsonl or .csv pose file of the same stem
/// in pose_dir. Runs validate_config.
PipelineConfig load_pipeline_config(const std::string& path);

/// Throws ConfigError when a referenced path is missing or a parameter is
/// out of range.
void validate_config(const PipelineConfig& config);

struct VideoReport {
  std::string id;
  bool ok = false;
  std::string error;
  std::size_t cues = 0;
  std::size_t tokens = 0;
  std::size_t rejected_tokens = 0;
  std::size_t sentences = 0;
  std::size_t relevant = 0;
  std::size_t demoted = 0;  // relevant by keywords, failed the visibility gate
  std::size_t correct = 0;
  std::size_t incorrect = 0;
  std::size_t summarized = 0;
  std::size_t clips = 0;
  std::vector<std::string> warnings;
};

struct RunReport {
  std::vector<VideoReport> videos;  // sorted by id
  DatasetSummary dataset;
  std::size_t visibility_clips = 0;
  std::vector<std::string> warnings;
  std::vector<std::string> outputs;  // relative to the output directory

  std::size_t failures() const;
  /// False only when every video failed.
  bool success() const;
};

/// ingest -> coarse -> sentences -> relevance -> correctness -> summary ->
/// clips per video, then dataset statistics, the visibility table and
/// clustering over all successful videos. A failing video is reported and
/// skipped. Writes report.json (deterministic) and timings.json.
RunReport run_pipeline(const PipelineConfig& config);

}  // namespace sublabel
