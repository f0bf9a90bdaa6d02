#pragma once
// Scripted one-video fixture project: an SRT transcript with planted
// irrelevant, correct and incorrect sentences, and a 30 fps pose stream whose
// frames follow the script (standing poses while talking, a push-up pose
// while demonstrating).

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "sublabel/clips.hpp"

namespace fixture {

namespace fs = std::filesystem;

enum class Scene { Talk, Correct, Incorrect, CloseUp, Reject };

struct Cue {
  std::int64_t start_ms;
  std::int64_t end_ms;
  const char* text;
  Scene scene;
  // Label a clip covering the middle of this cue must carry.
  sublabel::ClipLabel expected;
};

inline constexpr double kFps = 30.0;
inline constexpr std::int64_t kTotalFrames = 1800;  // 60 s
inline constexpr const char* kVideoId = "demo";
inline constexpr const char* kPlantedSummary = "having your butt up";

using sublabel::ClipLabel;

inline const std::vector<Cue>& script() {
  static const std::vector<Cue> cues = {
      {0, 5000, "Hello everyone and welcome to my channel where today we cover the perfect push up.",
       Scene::Talk, ClipLabel::Irrelevant},
      {5000, 9000, "Keep your back straight from head to heels.", Scene::Correct,
       ClipLabel::RelevantCorrect},
      {9000, 14000, "Hello again and do not forget to subscribe to the channel for more videos.",
       Scene::Talk, ClipLabel::Irrelevant},
      {14000, 18000, "Lower your chest all the way down to the floor.", Scene::Correct,
       ClipLabel::RelevantCorrect},
      {18000, 23000, "A common mistake is having your butt up in the air.", Scene::Incorrect,
       ClipLabel::RelevantIncorrect},
      {23000, 28000, "Thanks for watching and check the link in the description below.",
       Scene::Talk, ClipLabel::Irrelevant},
      {28000, 32000, "Keep your core tight and your body in one line.", Scene::Correct,
       ClipLabel::RelevantCorrect},
      {32000, 36000, "Do not let your hips sag toward the floor.", Scene::Incorrect,
       ClipLabel::RelevantIncorrect},
      // Keyword-relevant, but the camera is too close for the body to be seen.
      {36000, 41000, "Your elbows should be at about forty five degrees.", Scene::CloseUp,
       ClipLabel::Irrelevant},
      {41000, 45000, "Keep your elbows tucked close to your body.", Scene::Correct,
       ClipLabel::RelevantCorrect},
      // A push-up variation: rejected by the coarse pass until the next keyword.
      {45000, 50000, "Next is a quick look at the diamond push ups for your chest.", Scene::Reject,
       ClipLabel::Irrelevant},
      {50000, 54000, "They are hard but keep your core tight anyway.", Scene::Reject,
       ClipLabel::Irrelevant},
      {54000, 58000, "Here is the perfect push up again with your elbows tucked close.",
       Scene::Correct, ClipLabel::RelevantCorrect},
  };
  return cues;
}

inline std::string srt_time(std::int64_t ms) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%02lld:%02lld:%02lld,%03lld", (long long)(ms / 3600000),
                (long long)(ms / 60000 % 60), (long long)(ms / 1000 % 60), (long long)(ms % 1000));
  return buf;
}

inline std::string srt_document() {
  std::string out;
  int n = 1;
  for (const auto& c : script()) {
    out += std::to_string(n++) + "\n" + srt_time(c.start_ms) + " --> " + srt_time(c.end_ms) +
           "\n" + c.text + "\n\n";
  }
  return out;
}

inline Scene scene_at(std::int64_t frame) {
  const double ms = frame * 1000.0 / kFps;
  for (const auto& c : script())
    if (ms >= c.start_ms && ms < c.end_ms) return c.scene;
  return Scene::Talk;
}

using Pose2 = std::array<std::array<double, 2>, 33>;

// Facing the camera; the person's left side appears on the image right.
inline Pose2 standing(int gesture) {
  Pose2 p{};
  auto set = [&](int i, double x, double y) { p[i] = {x, y}; };
  set(0, 0.50, 0.20);
  set(1, 0.51, 0.18); set(2, 0.515, 0.18); set(3, 0.52, 0.18);
  set(4, 0.49, 0.18); set(5, 0.485, 0.18); set(6, 0.48, 0.18);
  set(7, 0.53, 0.19); set(8, 0.47, 0.19);
  set(9, 0.51, 0.23); set(10, 0.49, 0.23);
  set(11, 0.56, 0.30); set(12, 0.44, 0.30);
  set(13, 0.58, 0.42); set(14, 0.42, 0.42);
  set(15, 0.59, 0.53); set(16, 0.41, 0.53);
  set(23, 0.54, 0.55); set(24, 0.46, 0.55);
  set(25, 0.54, 0.72); set(26, 0.46, 0.72);
  set(27, 0.54, 0.88); set(28, 0.46, 0.88);
  set(29, 0.54, 0.90); set(30, 0.46, 0.90);
  set(31, 0.55, 0.92); set(32, 0.45, 0.92);
  if (gesture == 1) {  // right hand raised
    set(14, 0.38, 0.25); set(16, 0.36, 0.12);
  } else if (gesture == 2) {  // both hands in front of the chest
    set(13, 0.56, 0.40); set(14, 0.44, 0.40);
    set(15, 0.52, 0.36); set(16, 0.48, 0.36);
  } else if (gesture == 3) {  // left hand raised
    set(13, 0.62, 0.25); set(15, 0.64, 0.12);
  } else if (gesture == 4) {  // arms out to the sides
    set(13, 0.66, 0.30); set(14, 0.34, 0.30);
    set(15, 0.76, 0.30); set(16, 0.24, 0.30);
  }
  const double hs[2] = {p[15][0], p[16][0]};
  const double hy[2] = {p[15][1], p[16][1]};
  for (int s = 0; s < 2; ++s) {
    const double dir = s == 0 ? 1.0 : -1.0;
    set(17 + s, hs[s] + 0.010 * dir, hy[s] + 0.03);  // pinky
    set(19 + s, hs[s] + 0.005 * dir, hy[s] + 0.035);  // index
    set(21 + s, hs[s] - 0.010 * dir, hy[s] + 0.02);  // thumb
  }
  return p;
}

// Side view, body horizontal, arms extended.
inline Pose2 push_up() {
  Pose2 p{};
  auto set = [&](int i, double x, double y) { p[i] = {x, y}; };
  set(0, 0.20, 0.58);
  for (int i = 1; i <= 6; ++i) set(i, 0.21, 0.56);
  set(7, 0.23, 0.56); set(8, 0.23, 0.565);
  set(9, 0.205, 0.60); set(10, 0.205, 0.605);
  set(11, 0.28, 0.60); set(12, 0.285, 0.605);
  set(13, 0.29, 0.70); set(14, 0.295, 0.705);
  set(15, 0.28, 0.80); set(16, 0.285, 0.805);
  set(17, 0.27, 0.82); set(18, 0.275, 0.825);
  set(19, 0.26, 0.82); set(20, 0.265, 0.825);
  set(21, 0.285, 0.81); set(22, 0.29, 0.815);
  set(23, 0.55, 0.63); set(24, 0.555, 0.635);
  set(25, 0.70, 0.66); set(26, 0.705, 0.665);
  set(27, 0.85, 0.69); set(28, 0.855, 0.695);
  set(29, 0.87, 0.70); set(30, 0.875, 0.705);
  set(31, 0.86, 0.73); set(32, 0.865, 0.735);
  return p;
}

struct Noise {
  std::mt19937_64 gen;
  explicit Noise(std::uint64_t seed) : gen(seed) {}
  double uniform() { return double(gen() >> 11) * 0x1.0p-53; }
  double normal() {
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }
};

inline double round6(double v) { return std::round(v * 1e6) / 1e6; }

/// Writes the pose stream as JSONL with a header line.
inline void write_poses(const fs::path& path, std::uint64_t seed = 7) {
  Noise noise(seed);
  std::ofstream out(path, std::ios::binary);
  out << R"({"video_id":")" << kVideoId << R"(","fps":30})" << '\n';
  for (std::int64_t f = 0; f < kTotalFrames; ++f) {
    const Scene scene = scene_at(f);
    Pose2 base;
    double sigma = 0.002;
    if (scene == Scene::Correct || scene == Scene::Incorrect) {
      base = push_up();
    } else {
      // Gestures cycle every 1.5 s while talking.
      base = standing(static_cast<int>(f / 45) % 5);
    }
    nlohmann::ordered_json frame;
    frame["frame"] = f;
    auto arr = nlohmann::ordered_json::array();
    for (int i = 0; i < 33; ++i) {
      double vis;
      if (scene == Scene::CloseUp)
        vis = 0.15 + 0.1 * noise.uniform();
      else if (scene == Scene::Talk || scene == Scene::Reject)
        vis = i >= 23 ? 0.2 + 0.2 * noise.uniform() : 0.85 + 0.1 * noise.uniform();
      else
        vis = 0.85 + 0.1 * noise.uniform();
      const double x = base[i][0] + sigma * noise.normal();
      const double y = base[i][1] + sigma * noise.normal();
      const double z = sigma * noise.normal();
      arr.push_back({round6(x), round6(y), round6(z), round6(vis)});
    }
    frame["landmarks"] = std::move(arr);
    out << frame.dump() << '\n';
  }
}

struct Project {
  fs::path root;
  fs::path config;
  fs::path output;
};

/// Lays out subtitles/, poses/ and project.json under `root`. The lexicon
/// and corpus are the shipped defaults.
inline Project write_project(const fs::path& root, const fs::path& data_dir,
                             const std::string& output_name = "out") {
  fs::create_directories(root / "subtitles");
  fs::create_directories(root / "poses");
  {
    std::ofstream srt(root / "subtitles" / "demo.srt", std::ios::binary);
    srt << srt_document();
  }
  write_poses(root / "poses" / "demo.jsonl");
  nlohmann::ordered_json cfg;
  cfg["lexicon"] = (data_dir / "lexicon.json").string();
  cfg["corpus"] = (data_dir / "corpus.tsv").string();
  cfg["subtitle_dir"] = "subtitles";
  cfg["pose_dir"] = "poses";
  cfg["output_dir"] = output_name;
  cfg["fps"] = kFps;
  cfg["videos"] = {{{"id", kVideoId},
                    {"subtitles", "subtitles/demo.srt"},
                    {"poses", "poses/demo.jsonl"},
                    {"total_frames", kTotalFrames}}};
  cfg["parameters"] = {{"kmeans_k", 6}, {"seed", 42}, {"merge_gap", 15}};
  const fs::path config = root / "project.json";
  std::ofstream(config, std::ios::binary) << cfg.dump(2) << '\n';
  return {root, config, root / output_name};
}

}  // namespace fixture
