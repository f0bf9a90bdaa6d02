// Acceptance suite: prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails. SUBLABEL_UPDATE_GOLDEN=1 rewrites the
// golden end-to-end outputs instead of comparing against them.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <algorithm>
#include <numeric>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fixture.hpp"
#include "oracles.hpp"
#include "sublabel/analysis/cluster_report.hpp"
#include "sublabel/analysis/clustering.hpp"
#include "sublabel/analysis/rank_sum.hpp"
#include "sublabel/clips.hpp"
#include "sublabel/coarse.hpp"
#include "sublabel/correctness.hpp"
#include "sublabel/lexicon.hpp"
#include "sublabel/pipeline.hpp"
#include "sublabel/relevance.hpp"
#include "sublabel/sentence.hpp"
#include "sublabel/subtitle.hpp"

namespace fs = std::filesystem;
using namespace sublabel;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

oracle::Variants variants_of(const PatternSet& s) {
  oracle::Variants out;
  for (const auto& e : s.entries())
    for (const auto& v : e.variants) out.push_back(v);
  return out;
}

const Lexicon& shipped_lexicon() {
  static const Lexicon lex = load_lexicon(SUBLABEL_DATA_DIR "/lexicon.json");
  return lex;
}

// Filler words plus pieces of keyword phrases, so partial matches occur.
const std::vector<std::string> kFiller = {"and", "the",  "now", "so",   "your", "push",
                                          "up",  "ups",  "x",   "form", "back", "keep"};

std::vector<std::string> planted_stream(std::mt19937_64& gen, std::size_t length,
                                        const std::vector<const oracle::Variants*>& sets,
                                        double plant_rate) {
  std::vector<std::string> w;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  while (w.size() < length) {
    if (u(gen) < plant_rate) {
      const auto& set = *sets[gen() % sets.size()];
      const auto& v = set[gen() % set.size()];
      w.insert(w.end(), v.begin(), v.end());
    } else {
      w.push_back(kFiller[gen() % kFiller.size()]);
    }
  }
  return w;
}

TokenStream as_tokens(const std::vector<std::string>& words) {
  TokenStream t;
  for (std::size_t i = 0; i < words.size(); ++i)
    t.push_back(Token{words[i], static_cast<std::int64_t>(i) * 300,
                      static_cast<std::int64_t>(i + 1) * 300, i, false});
  return t;
}

// 1 -----------------------------------------------------------------------
Outcome coarse_equivalence() {
  const Lexicon& lex = shipped_lexicon();
  const auto kw = variants_of(lex.coarse_kw), akw = variants_of(lex.coarse_akw);
  std::mt19937_64 gen(1001);
  std::size_t mismatches = 0, rejected_total = 0;
  double seconds = 0;
  for (int round = 0; round < 1000; ++round) {
    auto words = planted_stream(gen, 20 + gen() % 300, {&kw, &akw}, 0.08);
    auto tokens = as_tokens(words);
    const auto start = std::chrono::steady_clock::now();
    auto spans = mark_coarse(tokens, lex);
    seconds += std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::vector<bool> got(words.size(), false);
    std::size_t covered = 0;
    for (const auto& s : spans) {
      if (s.begin != covered) ++mismatches;
      covered = s.end;
      for (std::size_t i = s.begin; i < s.end; ++i) got[i] = s.label == CoarseLabel::Rejected;
    }
    if (covered != words.size()) ++mismatches;
    auto want = oracle::coarse_scan(words, kw, akw);
    if (got != want) ++mismatches;
    for (bool r : want) rejected_total += r;
  }
  Outcome o;
  o.pass = mismatches == 0 && seconds < 5.0 && rejected_total > 0;
  o.detail = "1000 streams, mismatches=" + std::to_string(mismatches) +
             ", rejected tokens=" + std::to_string(rejected_total) +
             ", runtime=" + std::to_string(seconds) + "s (limit 5s)";
  return o;
}

// 2 -----------------------------------------------------------------------
Outcome relevance_equivalence() {
  const Lexicon& lex = shipped_lexicon();
  const auto kw = variants_of(lex.fine_kw), akw = variants_of(lex.fine_akw);
  std::mt19937_64 gen(2002);
  std::size_t mismatches = 0, relevant = 0, ties = 0, overlaps = 0;
  for (int round = 0; round < 1000; ++round) {
    auto words = planted_stream(gen, 3 + gen() % 30, {&kw, &akw}, 0.15);
    auto marks = mark_words(words, lex);
    auto want = oracle::stamp_windows(words, kw, akw, lex.k);
    for (std::size_t i = 0; i < words.size(); ++i)
      if (static_cast<int>(marks[i]) != want[i]) ++mismatches;
    const bool got_rel = vote(marks) == Relevance::Relevant;
    if (got_rel != oracle::vote_relevant(want)) ++mismatches;
    relevant += got_rel;
    long r = 0, a = 0;
    for (int m : want) {
      r += m == 1;
      a += m == 2;
    }
    ties += r == a && r > 0;
    // A keyword window that the anti-keyword pass overwrote.
    auto kw_only = oracle::stamp_windows(words, kw, {}, lex.k);
    for (std::size_t i = 0; i < words.size(); ++i)
      if (kw_only[i] == 1 && want[i] == 2) {
        ++overlaps;
        break;
      }
  }
  // Pinned order: a keyword window overlapped by an anti-keyword window.
  std::vector<std::string> pinned{"x", "x", "elbows", "x", "subscribe", "x", "x", "x", "x"};
  auto pm = mark_words(pinned, lex);
  const bool order_ok = pm[0] == Mark::Relevant && pm[2] == Mark::Irrelevant &&
                        pm[4] == Mark::Irrelevant && pm[8] == Mark::None &&
                        vote(pm) == Relevance::Irrelevant;
  Outcome o;
  o.pass = mismatches == 0 && order_ok && ties > 0 && overlaps > 0;
  o.detail = "1000 sentences, mismatches=" + std::to_string(mismatches) +
             ", relevant=" + std::to_string(relevant) + ", ties=" + std::to_string(ties) +
             ", overwrites=" + std::to_string(overlaps) +
             ", kw-then-akw pin=" + (order_ok ? "ok" : "broken");
  return o;
}

// 3 -----------------------------------------------------------------------
Outcome sentence_constraints() {
  std::size_t sentences = 0, violations = 0, docs = 0;
  auto check = [&](const std::string& doc) {
    const Lexicon& lex = shipped_lexicon();
    auto tokens = tokenize(parse_subtitles(doc, parse_format("auto", doc)));
    auto out = split_sentences(tokens, mark_coarse(tokens, lex), RuleSegmenter());
    ++docs;
    for (const auto& s : out) {
      ++sentences;
      if (s.char_len() < 20 || s.words.size() > 30 || s.end_ms - s.start_ms > 15000 ||
          s.words.empty() || s.start_ms > s.end_ms)
        ++violations;
    }
  };
  check(fixture::srt_document());
  // Randomized caption documents: long cues, no punctuation, tiny cues.
  std::mt19937_64 gen(3003);
  const char* vocab[] = {"keep", "your", "back", "straight", "so", "now", "perfect", "push",
                         "up",   "squats", "hello", "subscribe", "elbows", "a", "okay", "and"};
  for (int d = 0; d < 200; ++d) {
    std::string doc;
    std::int64_t t = 0;
    const int cues = 1 + static_cast<int>(gen() % 40);
    for (int c = 0; c < cues; ++c) {
      const std::int64_t len = 200 + static_cast<std::int64_t>(gen() % 25000);
      std::string text;
      const int n = 1 + static_cast<int>(gen() % 45);
      for (int i = 0; i < n; ++i) {
        text += std::string(i ? " " : "") + vocab[gen() % 16];
        if (gen() % 12 == 0) text += ".";
      }
      doc += std::to_string(c + 1) + "\n" + fixture::srt_time(t) + " --> " +
             fixture::srt_time(t + len) + "\n" + text + "\n\n";
      t += len + static_cast<std::int64_t>(gen() % 2000);
    }
    check(doc);
  }
  Outcome o;
  o.pass = violations == 0 && sentences > 0;
  o.detail = std::to_string(docs) + " documents, " + std::to_string(sentences) +
             " sentences, violations=" + std::to_string(violations);
  return o;
}

// 4 -----------------------------------------------------------------------
Outcome trigram_classifier() {
  std::mt19937_64 gen(4004);
  auto sentence = [&](char prefix) {
    std::string s;
    const int n = 4 + static_cast<int>(gen() % 9);
    for (int i = 0; i < n; ++i) {
      // Zipf-like word choice so some words are rare.
      const int w = static_cast<int>(std::pow(static_cast<double>(gen() % 10000) / 10000.0, 2) * 60);
      s += std::string(i ? " " : "") + prefix + std::to_string(w);
    }
    return s;
  };
  TrainingCorpus train, held;
  for (int i = 0; i < 500; ++i) {
    train.push_back({sentence('c'), Correctness::Correct});
    train.push_back({sentence('i'), Correctness::Incorrect});
  }
  for (int i = 0; i < 200; ++i) {
    held.push_back({sentence('c'), Correctness::Correct});
    held.push_back({sentence('i'), Correctness::Incorrect});
  }
  auto model = TrigramModel::train(train);
  std::size_t hits = 0;
  for (const auto& e : held) hits += model.classify_text(e.text).label == e.label;
  const double accuracy = static_cast<double>(hits) / static_cast<double>(held.size());
  std::size_t self = 0;
  for (const auto& e : train) self += model.classify_text(e.text).label == e.label;
  const bool balanced = model.prior(Correctness::Correct) == 0.5;

  auto again = TrigramModel::train(train);
  bool deterministic = again == model;
  for (const auto& e : held)
    deterministic = deterministic &&
                    again.classify_text(e.text).log_odds == model.classify_text(e.text).log_odds;
  Outcome o;
  o.pass = accuracy >= 0.95 && self == train.size() && balanced && deterministic;
  o.detail = "held-out accuracy=" + std::to_string(accuracy) + " (min 0.95), training " +
             std::to_string(self) + "/" + std::to_string(train.size()) +
             ", deterministic=" + (deterministic ? "yes" : "no");
  return o;
}

// 5 -----------------------------------------------------------------------
Outcome rank_sum() {
  using analysis::RankSumMethod;
  std::mt19937_64 gen(5005);
  double worst_exact = 0;
  std::size_t pairs = 0;
  for (std::size_t na = 1; na <= 11; ++na)
    for (std::size_t nb = 1; na + nb <= 12; ++nb) {
      ++pairs;
      for (int rep = 0; rep < 4; ++rep) {
        std::vector<double> a(na), b(nb);
        // Reps 0-1 tie-free, reps 2-3 with heavy ties.
        const bool ties = rep >= 2;
        for (auto& x : a) x = ties ? static_cast<double>(gen() % 3) : static_cast<double>(gen() % 1000000) / 1e6;
        for (auto& x : b) x = ties ? static_cast<double>(gen() % 3) : static_cast<double>(gen() % 1000000) / 1e6;
        const double got = analysis::rank_sum_test(a, b, RankSumMethod::Exact).p_value;
        worst_exact = std::max(worst_exact, std::abs(got - oracle::permutation_p(a, b)));
      }
    }
  std::vector<double> a{1, 2, 3}, b{4, 5, 6};
  const double p_small = analysis::rank_sum_test(a, b).p_value;

  double worst_approx = 0;
  for (int c = 0; c < 100; ++c) {
    const std::size_t na = 3 + gen() % 15;  // 3..17
    std::vector<double> pool(20);
    std::iota(pool.begin(), pool.end(), 0.0);
    std::shuffle(pool.begin(), pool.end(), gen);
    std::vector<double> x(pool.begin(), pool.begin() + static_cast<long>(na));
    std::vector<double> y(pool.begin() + static_cast<long>(na), pool.end());
    // A half-integer shift spreads the p-values without creating ties.
    const double shift = static_cast<double>(gen() % 12) + 0.5;
    for (auto& v : x) v += shift;
    const double approx = analysis::rank_sum_test(x, y, RankSumMethod::Normal).p_value;
    worst_approx = std::max(worst_approx, std::abs(approx - oracle::permutation_p(x, y)));
  }
  Outcome o;
  o.pass = worst_exact <= 1e-12 && std::abs(p_small - 0.1) <= 1e-12 && worst_approx <= 0.005;
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "%zu size pairs, max exact error=%.3g (limit 1e-12); [1,2,3] vs [4,5,6] p=%.12f; "
                "max approx error=%.5f over 100 cases (limit 0.005)",
                pairs, worst_exact, p_small, worst_approx);
  o.detail = buf;
  return o;
}

// 6 -----------------------------------------------------------------------
Outcome kmeans_structure() {
  using namespace analysis;
  fixture::Noise noise(6006);
  const fixture::Pose2 bases[3] = {fixture::standing(0), fixture::push_up(), fixture::standing(4)};
  std::vector<FeatureVector> pts;
  std::vector<std::size_t> truth;
  std::vector<PoseFrame> raw;
  for (std::size_t c = 0; c < 3; ++c)
    for (int i = 0; i < 300; ++i) {
      PoseFrame f;
      for (std::size_t j = 0; j < 33; ++j)
        f.landmarks[j] = {bases[c][j][0] + 0.01 * noise.normal(),
                          bases[c][j][1] + 0.01 * noise.normal(), 0.01 * noise.normal(), 1.0};
      raw.push_back(f);
      pts.push_back(*normalize_pose(f));
      truth.push_back(c);
    }
  KMeansOptions opt;
  opt.k = 3;
  opt.seed = 42;
  auto model = kmeans(pts, opt);
  const double ari = oracle::adjusted_rand(model.assignments, truth);
  bool monotone = true;
  for (std::size_t i = 1; i < model.inertia_history.size(); ++i)
    monotone = monotone && model.inertia_history[i] <= model.inertia_history[i - 1];
  const bool bitwise = kmeans(pts, opt) == model;

  double deviation = 0;
  std::mt19937_64 gen(66);
  std::uniform_real_distribution<double> u(-3.0, 3.0), s(0.2, 5.0);
  for (std::size_t i = 0; i < raw.size(); i += 7) {
    PoseFrame moved = raw[i];
    const double dx = u(gen), dy = u(gen), dz = u(gen), scale = s(gen);
    for (auto& l : moved.landmarks) l = {l.x * scale + dx, l.y * scale + dy, l.z * scale + dz, l.visibility};
    auto v = normalize_pose(moved);
    for (std::size_t j = 0; j < kPoseFeatureDims; ++j)
      deviation = std::max(deviation, std::abs((*v)[j] - pts[i][j]));
  }
  Outcome o;
  o.pass = ari >= 0.9 && monotone && bitwise && deviation <= 1e-9;
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "ARI=%.4f (min 0.9), inertia monotone=%s over %zu steps, bitwise repeat=%s, "
                "normalization deviation=%.3g (limit 1e-9)",
                ari, monotone ? "yes" : "no", model.inertia_history.size(), bitwise ? "yes" : "no",
                deviation);
  o.detail = buf;
  return o;
}

// 7 -----------------------------------------------------------------------
struct Sheet {
  std::map<std::string, double> count, total;
};

Outcome clip_partition(const std::vector<ClipRecord>& fixture_clips) {
  std::vector<std::vector<ClipRecord>> videos{fixture_clips};
  std::vector<std::int64_t> totals{fixture::kTotalFrames};
  std::mt19937_64 gen(7007);
  for (int v = 0; v < 50; ++v) {
    std::vector<Sentence> sentences;
    std::int64_t t = static_cast<std::int64_t>(gen() % 4000);
    const std::size_t n = gen() % 25;
    for (std::size_t i = 0; i < n; ++i) {
      Sentence s;
      s.id = i;
      s.words = {"some", "words"};
      s.start_ms = t;
      s.end_ms = t + 300 + static_cast<std::int64_t>(gen() % 8000);
      s.relevance = gen() % 2 ? Relevance::Relevant : Relevance::Irrelevant;
      if (s.relevance == Relevance::Relevant)
        s.correctness = gen() % 3 ? Correctness::Correct : Correctness::Incorrect;
      t = s.end_ms + static_cast<std::int64_t>(gen() % 3000);
      sentences.push_back(s);
    }
    const std::int64_t total = 1 + static_cast<std::int64_t>(gen() % 9000);
    videos.push_back(build_clips("v" + std::to_string(v), sentences, 30.0, total).clips);
    totals.push_back(total);
  }
  std::size_t defects = 0;
  std::vector<ClipRecord> all;
  for (std::size_t v = 0; v < videos.size(); ++v) {
    // Count frames covered zero or several times.
    std::vector<int> cover(static_cast<std::size_t>(totals[v]), 0);
    for (const auto& c : videos[v]) {
      for (std::int64_t f = c.frame_start; f < c.frame_end; ++f)
        if (f >= 0 && f < totals[v]) ++cover[static_cast<std::size_t>(f)];
        else ++defects;
      all.push_back(c);
    }
    for (int k : cover) defects += k != 1;
  }
  Sheet sheet;
  for (const auto& c : all) {
    sheet.count[clip_label_name(c.label)] += 1;
    sheet.total[clip_label_name(c.label)] += static_cast<double>(c.frame_end - c.frame_start);
  }
  const auto summary = summarize_dataset(all);
  double worst = 0;
  for (ClipLabel l : kClipLabels) {
    const std::string name = clip_label_name(l);
    const double n = sheet.count[name];
    const double mean = n > 0 ? sheet.total[name] / n : 0.0;
    worst = std::max(worst, std::abs(static_cast<double>(summary[l].count) - n));
    worst = std::max(worst, std::abs(summary[l].mean_length - mean));
  }
  Outcome o;
  o.pass = defects == 0 && worst <= 1e-9;
  o.detail = std::to_string(videos.size()) + " videos, " + std::to_string(all.size()) +
             " clips, gap/overlap frames=" + std::to_string(defects) +
             ", max summary deviation=" + std::to_string(worst) + " (limit 1e-9)";
  return o;
}

// 8 -----------------------------------------------------------------------
std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> golden_files(const fs::path& out) {
  std::vector<std::string> files{"manifest.jsonl", "stats.csv", "table.csv"};
  std::vector<std::string> figs;
  for (const auto& e : fs::directory_iterator(out / "figs"))
    figs.push_back("figs/" + e.path().filename().string());
  std::sort(figs.begin(), figs.end());
  files.insert(files.end(), figs.begin(), figs.end());
  return files;
}

Outcome golden_run(const fs::path& work, std::vector<ClipRecord>& clips_out, fs::path& out_dir) {
  fs::remove_all(work);
  auto first = fixture::write_project(work / "run1", SUBLABEL_DATA_DIR);
  auto second = fixture::write_project(work / "run2", SUBLABEL_DATA_DIR);
  auto r1 = run_pipeline(load_pipeline_config(first.config.string()));
  auto r2 = run_pipeline(load_pipeline_config(second.config.string()));
  out_dir = first.output;

  Outcome o;
  const auto files = golden_files(first.output);
  std::size_t identical = 0, golden_ok = 0;
  const fs::path golden = SUBLABEL_GOLDEN_DIR;
  const bool update = std::getenv("SUBLABEL_UPDATE_GOLDEN") != nullptr;
  for (const auto& f : files) {
    const std::string a = slurp(first.output / f);
    identical += a == slurp(second.output / f);
    if (update) {
      fs::create_directories((golden / f).parent_path());
      std::ofstream(golden / f, std::ios::binary) << a;
    }
    golden_ok += fs::exists(golden / f) && slurp(golden / f) == a;
  }
  identical += slurp(first.output / "report.json") == slurp(second.output / "report.json");

  std::ifstream manifest(first.output / "manifest.jsonl");
  clips_out = read_manifest_jsonl(manifest);

  // Planted labels at every cue midpoint, from the script alone.
  std::size_t label_errors = 0;
  for (const auto& cue : fixture::script()) {
    const auto mid = static_cast<std::int64_t>((cue.start_ms + cue.end_ms) / 2 * fixture::kFps / 1000);
    for (const auto& c : clips_out)
      if (c.frame_start <= mid && mid < c.frame_end && c.label != cue.expected) ++label_errors;
  }
  std::string planted_summary = "(none)";
  const auto butt_mid =
      static_cast<std::int64_t>(20500 * fixture::kFps / 1000);  // the "butt up" cue
  for (const auto& c : clips_out)
    if (c.frame_start <= butt_mid && butt_mid < c.frame_end && c.summary)
      planted_summary = *c.summary;

  o.pass = r1.success() && r1.failures() == 0 && identical == files.size() + 1 &&
           golden_ok == files.size() && label_errors == 0 &&
           planted_summary == fixture::kPlantedSummary;
  o.detail = std::to_string(identical) + "/" + std::to_string(files.size() + 1) +
             " outputs identical across runs, " + std::to_string(golden_ok) + "/" +
             std::to_string(files.size()) + " match golden" + (update ? " (updated)" : "") +
             ", planted label errors=" + std::to_string(label_errors) + ", summary=\"" +
             planted_summary + "\"";
  return o;
}

// 9 -----------------------------------------------------------------------
Outcome cluster_structure(const fs::path& out_dir) {
  auto doc = nlohmann::json::parse(slurp(out_dir / "clusters.json"));
  std::map<std::string, std::size_t> top;
  std::map<std::string, double> share;
  for (const auto& t : doc.at("combined").at("top_clusters")) {
    top[t.at("label")] = t.at("cluster");
    share[t.at("label")] = t.at("fraction");
  }
  Outcome o;
  const bool present =
      top.count("irrelevant") && top.count("relevant_correct") && top.count("relevant_incorrect");
  o.pass = present && top["relevant_correct"] == top["relevant_incorrect"] &&
           top["irrelevant"] != top["relevant_correct"];
  if (present) {
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "top clusters: correct=%zu (%.0f%%), incorrect=%zu (%.0f%%), irrelevant=%zu (%.0f%%)",
                  top["relevant_correct"], 100 * share["relevant_correct"],
                  top["relevant_incorrect"], 100 * share["relevant_incorrect"], top["irrelevant"],
                  100 * share["irrelevant"]);
    o.detail = buf;
  } else {
    o.detail = "a label is missing from the combined clustering";
  }
  return o;
}

}  // namespace

int main() {
  const fs::path work = fs::temp_directory_path() / "sublabel_acceptance";
  std::vector<ClipRecord> fixture_clips;
  fs::path out_dir;
  int failures = 0;
  auto report = [&](int n, const char* name, const std::function<Outcome()>& f) {
    Outcome o;
    try {
      o = f();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("%s criterion %d (%s): %s\n", o.pass ? "PASS" : "FAIL", n, name, o.detail.c_str());
    std::fflush(stdout);
  };
  report(1, "coarse segmentation equivalence", coarse_equivalence);
  report(2, "fine relevance equivalence", relevance_equivalence);
  report(3, "sentence constraints", sentence_constraints);
  report(4, "trigram classifier", trigram_classifier);
  report(5, "rank-sum correctness", rank_sum);
  report(6, "k-means", kmeans_structure);
  // Criterion 8 produces the fixture clips used by 7 and the clusters used by 9.
  Outcome golden;
  try {
    golden = golden_run(work, fixture_clips, out_dir);
  } catch (const std::exception& e) {
    golden = {false, std::string("exception: ") + e.what()};
  }
  report(7, "clip partition", [&] { return clip_partition(fixture_clips); });
  report(8, "end-to-end golden run", [&] { return golden; });
  report(9, "qualitative cluster structure", [&] { return cluster_structure(out_dir); });
  return failures == 0 ? 0 : 1;
}
