#include "sublabel/pipeline.hpp"

#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "sublabel/analysis/visibility.hpp"
#include "sublabel/coarse.hpp"
#include "sublabel/correctness.hpp"
#include "sublabel/error.hpp"
#include "sublabel/lexicon.hpp"
#include "sublabel/pose.hpp"
#include "sublabel/subtitle.hpp"
#include "sublabel/summarizer.hpp"

namespace fs = std::filesystem;

namespace sublabel {

namespace {

// The CLI registers "sublabel" first; embedded callers get a quiet stderr logger.
spdlog::logger& log() {
  static const std::shared_ptr<spdlog::logger> logger = [] {
    if (auto existing = spdlog::get("sublabel")) return existing;
    auto created = spdlog::stderr_color_mt("sublabel");
    created->set_level(spdlog::level::warn);
    return created;
  }();
  return *logger;
}

using ojson = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write '" + path.string() + "'");
  return out;
}

std::string resolve(const fs::path& base, const std::string& p) {
  if (p.empty()) return p;
  fs::path path(p);
  return (path.is_absolute() ? path : base / path).lexically_normal().string();
}

struct StageTimer {
  std::vector<std::pair<std::string, double>> stages;
  Clock::time_point last = Clock::now();
  void mark(const char* stage) {
    auto now = Clock::now();
    stages.emplace_back(stage, std::chrono::duration<double, std::milli>(now - last).count());
    last = now;
  }
};

struct VideoResult {
  VideoReport report;
  std::vector<ClipRecord> clips;
  std::optional<PoseStream> poses;
  StageTimer timer;
};

VideoResult process_video(const VideoInput& video, const Lexicon& lexicon,
                          const TrigramModel& model, const PipelineParameters& params,
                          const fs::path& out_dir) {
  VideoResult result;
  VideoReport& rep = result.report;
  rep.id = video.id;
  const fs::path dir = out_dir / "videos" / video.id;
  fs::create_directories(dir);

  const std::string doc = read_file(video.subtitles);
  const auto cues = parse_subtitles(doc, parse_format(video.format, doc));
  const TokenStream tokens = tokenize(cues);
  rep.cues = cues.size();
  rep.tokens = tokens.size();
  {
    auto out = open_out(dir / "tokens.jsonl");
    write_tokens_jsonl(out, tokens);
  }
  result.timer.mark("ingest");

  const auto spans = mark_coarse(tokens, lexicon);
  for (const auto& s : spans)
    if (s.label == CoarseLabel::Rejected) rep.rejected_tokens += s.end - s.begin;
  {
    auto out = open_out(dir / "spans.json");
    write_spans_json(out, spans, tokens);
  }
  result.timer.mark("coarse");

  RuleSegmenter::Options seg;
  seg.pause_ms = params.pause_ms;
  auto sentences = split_sentences(tokens, spans, RuleSegmenter(seg), params.limits);
  rep.sentences = sentences.size();
  {
    auto out = open_out(dir / "sentences.jsonl");
    write_sentences_jsonl(out, sentences);
  }
  result.timer.mark("sentences");

  PoseStream poses = load_poses(video.poses, video.fps, video.id);
  classify_relevance(sentences, lexicon, &poses, params.gate);
  for (const auto& s : sentences) {
    if (s.relevance == Relevance::Relevant) ++rep.relevant;
    if (s.gate == GateStatus::Fail || s.gate == GateStatus::NoPoseData) ++rep.demoted;
  }
  result.timer.mark("relevance");

  classify_correctness(sentences, model);
  summarize_incorrect(sentences, lexicon);
  for (const auto& s : sentences) {
    if (s.correctness == Correctness::Correct) ++rep.correct;
    if (s.correctness == Correctness::Incorrect) ++rep.incorrect;
    if (s.summary) ++rep.summarized;
  }
  {
    auto out = open_out(dir / "labeled.jsonl");
    write_sentences_jsonl(out, sentences);
  }
  result.timer.mark("correctness");

  const std::int64_t total = video.total_frames.value_or(poses.frame_extent());
  auto built = build_clips(video.id, sentences, poses.fps(), total, ClipOptions{params.merge_gap});
  rep.clips = built.clips.size();
  rep.warnings = std::move(built.warnings);
  if (const auto gaps = poses.gaps(); !gaps.empty())
    rep.warnings.push_back(std::to_string(gaps.size()) + " pose frames missing");
  {
    auto out = open_out(dir / "manifest.jsonl");
    write_manifest_jsonl(out, built.clips);
  }
  result.timer.mark("clips");

  result.clips = std::move(built.clips);
  result.poses = std::move(poses);
  rep.ok = true;
  return result;
}

ojson video_json(const VideoReport& v) {
  ojson j;
  j["id"] = v.id;
  j["status"] = v.ok ? "ok" : "failed";
  if (!v.ok) {
    j["error"] = v.error;
    return j;
  }
  j["counts"] = {{"cues", v.cues},
                 {"tokens", v.tokens},
                 {"rejected_tokens", v.rejected_tokens},
                 {"sentences", v.sentences},
                 {"relevant", v.relevant},
                 {"demoted_by_visibility", v.demoted},
                 {"correct", v.correct},
                 {"incorrect", v.incorrect},
                 {"summarized", v.summarized},
                 {"clips", v.clips}};
  j["warnings"] = v.warnings;
  return j;
}

bool pose_header_has_fps(const std::string& path) {
  std::ifstream in(path);
  std::string first;
  std::getline(in, first);
  auto header = nlohmann::json::parse(first, nullptr, false);
  return !header.is_discarded() && header.is_object() && !header.contains("frame") &&
         header.contains("fps");
}

template <typename T>
T get_or(const nlohmann::json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(std::string("parameter '") + key + "' has the wrong type");
  }
}

}  // namespace

PipelineConfig load_pipeline_config(const std::string& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("project file is not valid JSON: " + std::string(e.what()));
  } catch (const ValidationError& e) {
    throw ConfigError(e.what());
  }
  if (!j.is_object()) throw ConfigError("project file must be a JSON object");
  const fs::path base = fs::path(path).parent_path();

  PipelineConfig c;
  c.lexicon = resolve(base, get_or<std::string>(j, "lexicon", ""));
  c.corpus = resolve(base, get_or<std::string>(j, "corpus", ""));
  c.model = resolve(base, get_or<std::string>(j, "model", ""));
  c.subtitle_dir = resolve(base, get_or<std::string>(j, "subtitle_dir", ""));
  c.pose_dir = resolve(base, get_or<std::string>(j, "pose_dir", ""));
  c.output_dir = resolve(base, get_or<std::string>(j, "output_dir", "out"));

  const nlohmann::json p = j.value("parameters", nlohmann::json::object());
  PipelineParameters& params = c.params;
  if (p.contains("k")) params.k = get_or<int>(p, "k", 3);
  params.gate.min_visibility = get_or(p, "tau_vis", params.gate.min_visibility);
  params.gate.min_fraction = get_or(p, "phi", params.gate.min_fraction);
  params.limits.min_chars = get_or(p, "min_chars", params.limits.min_chars);
  params.limits.max_words = get_or(p, "max_words", params.limits.max_words);
  params.limits.max_display_ms = get_or(p, "max_display_ms", params.limits.max_display_ms);
  params.pause_ms = get_or(p, "pause_ms", params.pause_ms);
  params.merge_gap = get_or(p, "merge_gap", params.merge_gap);
  params.alpha = get_or(p, "alpha", params.alpha);
  params.kmeans.k = get_or(p, "kmeans_k", params.kmeans.k);
  params.kmeans.seed = get_or(p, "seed", params.kmeans.seed);
  params.kmeans.tol = get_or(p, "tol", params.kmeans.tol);
  params.kmeans.max_iter = get_or(p, "max_iter", params.kmeans.max_iter);
  params.workers = get_or(p, "workers", params.workers);
  params.default_fps = get_or(j, "fps", params.default_fps);
  try {
    params.cluster_mode = analysis::parse_cluster_mode(get_or<std::string>(p, "cluster_mode", "both"));
  } catch (const UsageError& e) {
    throw ConfigError(e.what());
  }

  if (j.contains("videos")) {
    for (const auto& v : j.at("videos")) {
      VideoInput in;
      in.id = get_or<std::string>(v, "id", "");
      in.subtitles = resolve(base, get_or<std::string>(v, "subtitles", ""));
      in.poses = resolve(base, get_or<std::string>(v, "poses", ""));
      in.format = get_or<std::string>(v, "format", "auto");
      if (v.contains("fps")) in.fps = get_or<double>(v, "fps", 30.0);
      if (v.contains("total_frames")) in.total_frames = get_or<std::int64_t>(v, "total_frames", 0);
      if (in.id.empty()) in.id = fs::path(in.subtitles).stem().string();
      c.videos.push_back(std::move(in));
    }
  } else if (!c.subtitle_dir.empty()) {
    if (!fs::is_directory(c.subtitle_dir))
      throw ConfigError("subtitle_dir '" + c.subtitle_dir + "' is not a directory");
    std::vector<fs::path> subs;
    for (const auto& entry : fs::directory_iterator(c.subtitle_dir)) {
      const auto ext = entry.path().extension();
      if (entry.is_regular_file() && (ext == ".srt" || ext == ".vtt")) subs.push_back(entry.path());
    }
    std::sort(subs.begin(), subs.end());
    for (const auto& s : subs) {
      VideoInput in;
      in.id = s.stem().string();
      in.subtitles = s.string();
      const fs::path pose_dir = c.pose_dir.empty() ? fs::path(c.subtitle_dir) : fs::path(c.pose_dir);
      in.poses = (pose_dir / (in.id + ".jsonl")).string();
      if (!fs::exists(in.poses) && fs::exists(pose_dir / (in.id + ".csv")))
        in.poses = (pose_dir / (in.id + ".csv")).string();
      c.videos.push_back(std::move(in));
    }
  }
  for (auto& v : c.videos)
    if (!v.fps && fs::path(v.poses).extension() == ".csv") v.fps = params.default_fps;

  validate_config(c);
  return c;
}

void validate_config(const PipelineConfig& c) {
  auto require_file = [](const std::string& what, const std::string& path) {
    if (path.empty()) throw ConfigError(what + " path is not set");
    if (!fs::exists(path)) throw ConfigError(what + " '" + path + "' does not exist");
  };
  require_file("lexicon", c.lexicon);
  if (c.model.empty())
    require_file("corpus", c.corpus);
  else
    require_file("model", c.model);
  if (c.output_dir.empty()) throw ConfigError("output_dir is not set");

  std::vector<std::string> ids;
  for (const auto& v : c.videos) {
    if (v.id.empty()) throw ConfigError("video without id");
    require_file("subtitles of " + v.id, v.subtitles);
    require_file("poses of " + v.id, v.poses);
    if (v.fps && !(*v.fps > 0.0)) throw ConfigError("fps of " + v.id + " must be positive");
    if (v.total_frames && *v.total_frames < 0)
      throw ConfigError("total_frames of " + v.id + " must be >= 0");
    ids.push_back(v.id);
  }
  std::sort(ids.begin(), ids.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end())
    throw ConfigError("duplicate video id '" + *std::adjacent_find(ids.begin(), ids.end()) + "'");

  const PipelineParameters& p = c.params;
  auto check = [](bool ok, const char* message) {
    if (!ok) throw ConfigError(message);
  };
  check(!p.k || *p.k >= 1, "k must be >= 1");
  check(p.gate.min_visibility >= 0.0 && p.gate.min_visibility <= 1.0, "tau_vis must lie in [0, 1]");
  check(p.gate.min_fraction >= 0.0 && p.gate.min_fraction <= 1.0, "phi must lie in [0, 1]");
  check(p.limits.max_words >= 1, "max_words must be >= 1");
  check(p.limits.max_display_ms > 0, "max_display_ms must be > 0");
  check(p.pause_ms >= 0, "pause_ms must be >= 0");
  check(p.merge_gap >= 0, "merge_gap must be >= 0");
  check(p.alpha > 0.0, "alpha must be > 0");
  check(p.kmeans.k >= 1, "kmeans_k must be >= 1");
  check(p.kmeans.tol >= 0.0, "tol must be >= 0");
  check(p.kmeans.max_iter >= 1, "max_iter must be >= 1");
  check(p.workers >= 1, "workers must be >= 1");
  check(p.default_fps > 0.0, "fps must be > 0");
}

std::size_t RunReport::failures() const {
  return static_cast<std::size_t>(
      std::count_if(videos.begin(), videos.end(), [](const VideoReport& v) { return !v.ok; }));
}

bool RunReport::success() const { return videos.empty() || failures() < videos.size(); }

RunReport run_pipeline(const PipelineConfig& config) {
  validate_config(config);
  const fs::path out_dir(config.output_dir);
  fs::create_directories(out_dir);

  Lexicon lexicon = load_lexicon(config.lexicon);
  if (config.params.k) lexicon.k = *config.params.k;
  TrigramModel model;
  if (!config.model.empty()) {
    std::ifstream in(config.model, std::ios::binary);
    model = TrigramModel::load(in);
  } else {
    model = TrigramModel::train(load_corpus(config.corpus), config.params.alpha);
  }

  std::vector<VideoInput> videos = config.videos;
  std::sort(videos.begin(), videos.end(),
            [](const VideoInput& a, const VideoInput& b) { return a.id < b.id; });
  std::vector<VideoResult> results(videos.size());

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < videos.size(); i = next++) {
      VideoInput v = videos[i];
      if (!v.fps && !pose_header_has_fps(v.poses)) v.fps = config.params.default_fps;
      try {
        log().info("processing video {}", v.id);
        results[i] = process_video(v, lexicon, model, config.params, out_dir);
      } catch (const std::exception& e) {
        log().error("video {} failed: {}", v.id, e.what());
        results[i] = VideoResult{};
        results[i].report.id = v.id;
        results[i].report.error = e.what();
      }
    }
  };
  const std::size_t threads = std::min(config.params.workers, std::max<std::size_t>(1, videos.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  RunReport report;
  std::vector<ClipRecord> clips;
  std::map<std::string, PoseStream> poses;
  for (auto& r : results) {
    report.videos.push_back(r.report);
    if (!r.report.ok) continue;
    clips.insert(clips.end(), r.clips.begin(), r.clips.end());
    poses.emplace(r.report.id, std::move(*r.poses));
  }
  report.dataset = summarize_dataset(clips);

  {
    auto out = open_out(out_dir / "manifest.jsonl");
    write_manifest_jsonl(out, clips);
    auto stats = open_out(out_dir / "stats.csv");
    write_dataset_summary_csv(stats, report.dataset);
  }
  report.outputs = {"manifest.jsonl", "stats.csv"};

  const auto vis = analysis::clip_landmark_visibility(clips, poses);
  report.visibility_clips = vis.rows.size();
  for (const auto& e : vis.excluded) report.warnings.push_back("visibility: " + e);
  {
    auto out = open_out(out_dir / "table.csv");
    analysis::write_visibility_csv(out, analysis::compare_visibility(vis));
  }
  report.outputs.push_back("table.csv");

  const auto clusters = analysis::analyze_clusters(clips, poses, config.params.cluster_mode,
                                                   config.params.kmeans);
  for (const auto& w : clusters.warnings) report.warnings.push_back("clustering: " + w);
  const auto figures = analysis::write_cluster_analysis(
      clusters, (out_dir / "clusters.json").string(), (out_dir / "figs").string());
  report.outputs.push_back("clusters.json");
  for (const auto& f : figures) report.outputs.push_back(fs::relative(f, out_dir).generic_string());

  ojson doc;
  doc["videos"] = ojson::array();
  for (const auto& v : report.videos) doc["videos"].push_back(video_json(v));
  doc["succeeded"] = report.videos.size() - report.failures();
  doc["failed"] = report.failures();
  ojson dataset = ojson::object();
  for (ClipLabel l : kClipLabels)
    dataset[clip_label_name(l)] = {{"count", report.dataset[l].count},
                                   {"mean_length_frames", report.dataset[l].mean_length}};
  doc["dataset"] = std::move(dataset);
  doc["visibility_clips"] = report.visibility_clips;
  doc["warnings"] = report.warnings;
  doc["outputs"] = report.outputs;
  {
    auto out = open_out(out_dir / "report.json");
    out << doc.dump(1) << '\n';
  }

  ojson timings = ojson::object();
  for (const auto& r : results) {
    ojson stages = ojson::object();
    for (const auto& [stage, ms] : r.timer.stages) stages[stage] = ms;
    timings[r.report.id] = std::move(stages);
  }
  {
    auto out = open_out(out_dir / "timings.json");
    out << timings.dump(1) << '\n';
  }
  return report;
}

}  // namespace sublabel
