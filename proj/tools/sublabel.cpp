// sublabel: command-line front end. One subcommand per pipeline stage plus
// `pipeline run` for a whole project.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "sublabel/analysis/cluster_report.hpp"
#include "sublabel/analysis/visibility.hpp"
#include "sublabel/clips.hpp"
#include "sublabel/coarse.hpp"
#include "sublabel/correctness.hpp"
#include "sublabel/error.hpp"
#include "sublabel/lexicon.hpp"
#include "sublabel/pipeline.hpp"
#include "sublabel/pose.hpp"
#include "sublabel/relevance.hpp"
#include "sublabel/sentence.hpp"
#include "sublabel/subtitle.hpp"
#include "sublabel/summarizer.hpp"

namespace fs = std::filesystem;
using namespace sublabel;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  return in;
}

// Writes through a temporary so a failed stage never leaves a half file.
template <class F>
void write_out(const std::string& path, F&& body) {
  if (path.empty() || path == "-") {
    body(std::cout);
    return;
  }
  fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    body(out);
    if (!out) throw Error("write failed: " + path);
  }
  fs::rename(tmp, path);
}

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("sublabel");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("SUBLABEL_LOG")) {
    auto level = spdlog::level::from_str(env);
    // from_str maps unknown names to "off"; only honour it when asked for.
    if (level != spdlog::level::off || std::string(env) == "off") spdlog::set_level(level);
  }
}

std::map<std::string, PoseStream> load_pose_map(const std::vector<std::string>& paths,
                                                 std::optional<double> fps) {
  std::map<std::string, PoseStream> out;
  for (const auto& p : paths) {
    PoseStream s = load_poses(p, fps);
    std::string id = s.video_id();
    out.emplace(id, std::move(s));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();

  CLI::App app{"Subtitle-driven clip labeling for exercise videos"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "sublabel 0.1.0");

  // ingest
  std::string ingest_file, ingest_format = "auto", ingest_out;
  auto* ingest = app.add_subcommand("ingest", "Parse SRT/VTT subtitles into a token stream");
  ingest->add_option("file", ingest_file, "Subtitle file")->required()->check(CLI::ExistingFile);
  ingest->add_option("--format", ingest_format, "auto, srt or vtt")
      ->check(CLI::IsMember({"auto", "srt", "vtt"}));
  ingest->add_option("--out", ingest_out, "tokens.jsonl (default stdout)");

  // lexicon check
  std::string lex_file;
  auto* lexicon = app.add_subcommand("lexicon", "Lexicon utilities");
  lexicon->require_subcommand(1);
  auto* lex_check = lexicon->add_subcommand("check", "Validate a lexicon and print expansion counts");
  lex_check->add_option("file", lex_file)->required()->check(CLI::ExistingFile);

  // segment coarse / sentences
  auto* segment = app.add_subcommand("segment", "Coarse and sentence segmentation");
  segment->require_subcommand(1);
  std::string coarse_tokens, coarse_lex, coarse_out;
  auto* coarse = segment->add_subcommand("coarse", "Mark kept and rejected token spans");
  coarse->add_option("--tokens", coarse_tokens)->required()->check(CLI::ExistingFile);
  coarse->add_option("--lexicon", coarse_lex)->required()->check(CLI::ExistingFile);
  coarse->add_option("--out", coarse_out);

  std::string sent_spans, sent_out;
  SentenceLimits limits;
  std::int64_t pause_ms = 800;
  auto* sentences = segment->add_subcommand("sentences", "Split kept spans into sentences");
  sentences->add_option("--spans", sent_spans, "spans.json from segment coarse")
      ->required()
      ->check(CLI::ExistingFile);
  sentences->add_option("--out", sent_out);
  sentences->add_option("--min-chars", limits.min_chars);
  sentences->add_option("--max-words", limits.max_words);
  sentences->add_option("--max-display-ms", limits.max_display_ms);
  sentences->add_option("--pause-ms", pause_ms);

  // classify relevance
  auto* classify = app.add_subcommand("classify", "Sentence classification");
  classify->require_subcommand(1);
  std::string rel_in, rel_lex, rel_poses, rel_out;
  std::optional<double> rel_fps;
  std::optional<int> rel_k;
  VisibilityGate gate;
  auto* relevance = classify->add_subcommand("relevance", "Keyword vote plus visibility gate");
  relevance->add_option("--sentences", rel_in)->required()->check(CLI::ExistingFile);
  relevance->add_option("--lexicon", rel_lex)->required()->check(CLI::ExistingFile);
  relevance->add_option("--poses", rel_poses, "Pose stream; omit to skip the gate")
      ->check(CLI::ExistingFile);
  relevance->add_option("--fps", rel_fps, "Overrides the pose header fps");
  relevance->add_option("--k", rel_k, "Window size (default from the lexicon)");
  relevance->add_option("--tau-vis", gate.min_visibility)->check(CLI::Range(0.0, 1.0));
  relevance->add_option("--phi", gate.min_fraction)->check(CLI::Range(0.0, 1.0));
  relevance->add_option("--out", rel_out);

  // correctness train / classify
  auto* correctness = app.add_subcommand("correctness", "Trigram correctness classifier");
  correctness->require_subcommand(1);
  std::string train_corpus, train_out;
  double alpha = 1.0;
  auto* train = correctness->add_subcommand("train", "Train a model from a labeled corpus");
  train->add_option("--corpus", train_corpus)->required()->check(CLI::ExistingFile);
  train->add_option("--out", train_out)->required();
  train->add_option("--alpha", alpha, "Add-alpha smoothing")->check(CLI::PositiveNumber);
  std::string cc_model, cc_in, cc_out;
  auto* cclassify = correctness->add_subcommand("classify", "Label relevant sentences");
  cclassify->add_option("--model", cc_model)->required()->check(CLI::ExistingFile);
  cclassify->add_option("--in", cc_in)->required()->check(CLI::ExistingFile);
  cclassify->add_option("--out", cc_out, "Default: rewrite --in");

  // summarize
  std::string sum_in, sum_lex, sum_out;
  auto* summarize_cmd = app.add_subcommand("summarize", "Summarize incorrect sentences");
  summarize_cmd->add_option("--in", sum_in)->required()->check(CLI::ExistingFile);
  summarize_cmd->add_option("--lexicon", sum_lex)->required()->check(CLI::ExistingFile);
  summarize_cmd->add_option("--out", sum_out, "Default: rewrite --in");

  // poses validate
  auto* poses = app.add_subcommand("poses", "Pose stream utilities");
  poses->require_subcommand(1);
  std::string pv_file;
  std::optional<double> pv_fps;
  auto* pvalidate = poses->add_subcommand("validate", "Check a pose file and print a summary");
  pvalidate->add_option("file", pv_file)->required()->check(CLI::ExistingFile);
  pvalidate->add_option("--fps", pv_fps);

  // clips build / stats
  auto* clips = app.add_subcommand("clips", "Clip manifest");
  clips->require_subcommand(1);
  std::string cb_in, cb_out, cb_video;
  double cb_fps = 0;
  std::int64_t cb_frames = 0;
  ClipOptions clip_opts;
  auto* cbuild = clips->add_subcommand("build", "Turn labeled sentences into clips");
  cbuild->add_option("--in", cb_in)->required()->check(CLI::ExistingFile);
  cbuild->add_option("--fps", cb_fps)->required()->check(CLI::PositiveNumber);
  cbuild->add_option("--frames", cb_frames)->required()->check(CLI::NonNegativeNumber);
  cbuild->add_option("--out", cb_out);
  cbuild->add_option("--video-id", cb_video, "Default: stem of --in");
  cbuild->add_option("--merge-gap", clip_opts.merge_gap)->check(CLI::NonNegativeNumber);
  std::string cs_in;
  auto* cstats = clips->add_subcommand("stats", "Per-label counts and mean lengths");
  cstats->add_option("--in", cs_in)->required()->check(CLI::ExistingFile);

  // analyze visibility / cluster
  auto* analyze = app.add_subcommand("analyze", "Label validation");
  analyze->require_subcommand(1);
  std::string av_manifest, av_out;
  std::vector<std::string> av_poses;
  std::optional<double> av_fps;
  auto* avis = analyze->add_subcommand("visibility", "Per-landmark rank-sum table");
  avis->add_option("--manifest", av_manifest)->required()->check(CLI::ExistingFile);
  avis->add_option("--poses", av_poses, "Pose files, one per video")
      ->required()
      ->check(CLI::ExistingFile);
  avis->add_option("--fps", av_fps);
  avis->add_option("--out", av_out);

  std::string ac_manifest, ac_out = "clusters.json", ac_render, ac_mode = "combined";
  std::vector<std::string> ac_poses;
  std::optional<double> ac_fps;
  analysis::KMeansOptions km;
  auto* aclust = analyze->add_subcommand("cluster", "k-means over normalized pose frames");
  aclust->add_option("--manifest", ac_manifest)->required()->check(CLI::ExistingFile);
  aclust->add_option("--poses", ac_poses)->required()->check(CLI::ExistingFile);
  aclust->add_option("--fps", ac_fps);
  aclust->add_option("--mode", ac_mode)->check(CLI::IsMember({"combined", "per-class", "both"}));
  aclust->add_option("--k", km.k)->check(CLI::PositiveNumber);
  aclust->add_option("--seed", km.seed);
  aclust->add_option("--max-iter", km.max_iter)->check(CLI::PositiveNumber);
  aclust->add_option("--tol", km.tol)->check(CLI::NonNegativeNumber);
  aclust->add_option("--out", ac_out);
  aclust->add_option("--render-dir", ac_render, "Write one SVG per centroid here");

  // pipeline run
  auto* pipeline = app.add_subcommand("pipeline", "End-to-end run");
  pipeline->require_subcommand(1);
  std::string pr_config;
  auto* prun = pipeline->add_subcommand("run", "Run every stage for a project");
  prun->add_option("--config", pr_config)->required()->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*ingest) {
      std::string doc = read_file(ingest_file);
      auto cues = parse_subtitles(doc, parse_format(ingest_format, doc));
      auto tokens = tokenize(cues);
      write_out(ingest_out, [&](std::ostream& o) { write_tokens_jsonl(o, tokens); });
      spdlog::info("{} cues, {} tokens", cues.size(), tokens.size());
    } else if (*lex_check) {
      Lexicon lex = load_lexicon(lex_file);
      auto line = [](const PatternSet& s) {
        std::cout << s.name() << ": " << s.entries().size() << " templates, " << s.variant_count()
                  << " variants\n";
      };
      line(lex.coarse_kw);
      line(lex.coarse_akw);
      line(lex.fine_kw);
      line(lex.fine_akw);
      line(lex.body_parts);
      std::cout << "verbs: " << lex.verbs.size() << "\nk: " << lex.k << "\n";
    } else if (*coarse) {
      Lexicon lex = load_lexicon(coarse_lex);
      auto in = open_in(coarse_tokens);
      TokenStream tokens = read_tokens_jsonl(in);
      auto spans = mark_coarse(tokens, lex);
      write_out(coarse_out, [&](std::ostream& o) { write_spans_json(o, spans, tokens); });
    } else if (*sentences) {
      auto in = open_in(sent_spans);
      TokenStream tokens;
      auto spans = read_spans_json(in, &tokens);
      RuleSegmenter::Options opts;
      opts.pause_ms = pause_ms;
      auto out = split_sentences(tokens, spans, RuleSegmenter(opts), limits);
      write_out(sent_out, [&](std::ostream& o) { write_sentences_jsonl(o, out); });
    } else if (*relevance) {
      Lexicon lex = load_lexicon(rel_lex);
      if (rel_k) {
        if (*rel_k < 1) throw UsageError("--k must be at least 1");
        lex.k = *rel_k;
      }
      auto in = open_in(rel_in);
      auto sents = read_sentences_jsonl(in);
      std::optional<PoseStream> stream;
      if (!rel_poses.empty()) stream = load_poses(rel_poses, rel_fps);
      classify_relevance(sents, lex, stream ? &*stream : nullptr, gate);
      write_out(rel_out, [&](std::ostream& o) { write_sentences_jsonl(o, sents); });
    } else if (*train) {
      auto model = TrigramModel::train(load_corpus(train_corpus), alpha);
      write_out(train_out, [&](std::ostream& o) { model.save(o); });
      std::cout << "vocabulary: " << model.vocabulary().size() << "\n";
    } else if (*cclassify) {
      auto min = open_in(cc_model);
      auto model = TrigramModel::load(min);
      auto in = open_in(cc_in);
      auto sents = read_sentences_jsonl(in);
      in.close();
      classify_correctness(sents, model);
      write_out(cc_out.empty() ? cc_in : cc_out,
                [&](std::ostream& o) { write_sentences_jsonl(o, sents); });
    } else if (*summarize_cmd) {
      Lexicon lex = load_lexicon(sum_lex);
      auto in = open_in(sum_in);
      auto sents = read_sentences_jsonl(in);
      in.close();
      summarize_incorrect(sents, lex);
      write_out(sum_out.empty() ? sum_in : sum_out,
                [&](std::ostream& o) { write_sentences_jsonl(o, sents); });
    } else if (*pvalidate) {
      PoseStream s = load_poses(pv_file, pv_fps);
      auto gaps = s.gaps();
      std::cout << "video_id: " << s.video_id() << "\nfps: " << s.fps()
                << "\nframes: " << s.size() << "\nextent: " << s.frame_extent()
                << "\nduration_s: " << s.duration_seconds() << "\ngaps: " << gaps.size() << "\n";
    } else if (*cbuild) {
      auto in = open_in(cb_in);
      auto sents = read_sentences_jsonl(in);
      std::string vid = cb_video.empty() ? fs::path(cb_in).stem().string() : cb_video;
      auto result = build_clips(vid, sents, cb_fps, cb_frames, clip_opts);
      for (const auto& w : result.warnings) spdlog::warn("{}", w);
      write_out(cb_out, [&](std::ostream& o) { write_manifest_jsonl(o, result.clips); });
    } else if (*cstats) {
      auto in = open_in(cs_in);
      auto manifest = read_manifest_jsonl(in);
      write_dataset_summary_csv(std::cout, summarize_dataset(manifest));
    } else if (*avis) {
      auto in = open_in(av_manifest);
      auto manifest = read_manifest_jsonl(in);
      auto streams = load_pose_map(av_poses, av_fps);
      auto table = analysis::clip_landmark_visibility(manifest, streams);
      for (const auto& e : table.excluded) spdlog::info("excluded {}", e);
      auto results = analysis::compare_visibility(table);
      write_out(av_out, [&](std::ostream& o) { analysis::write_visibility_csv(o, results); });
    } else if (*aclust) {
      auto in = open_in(ac_manifest);
      auto manifest = read_manifest_jsonl(in);
      auto streams = load_pose_map(ac_poses, ac_fps);
      auto result =
          analysis::analyze_clusters(manifest, streams, analysis::parse_cluster_mode(ac_mode), km);
      for (const auto& w : result.warnings) spdlog::warn("{}", w);
      std::optional<std::string> render;
      if (!ac_render.empty()) render = ac_render;
      auto written = analysis::write_cluster_analysis(result, ac_out, render);
      spdlog::info("{} drawings written", written.size());
    } else if (*prun) {
      PipelineConfig config = load_pipeline_config(pr_config);
      RunReport report = run_pipeline(config);
      for (const auto& v : report.videos) {
        std::cout << v.id << ": " << (v.ok ? "ok" : "FAILED " + v.error) << "\n";
      }
      std::cout << report.videos.size() - report.failures() << " of " << report.videos.size()
                << " videos succeeded\n";
      return report.success() ? 0 : 1;
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
