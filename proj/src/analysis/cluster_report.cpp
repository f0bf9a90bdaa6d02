#include "sublabel/analysis/cluster_report.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "sublabel/analysis/render.hpp"
#include "sublabel/error.hpp"

namespace sublabel::analysis {

namespace {

using ojson = nlohmann::ordered_json;

std::size_t distinct(const std::vector<FeatureVector>& points) {
  std::vector<FeatureVector> copy = points;
  std::sort(copy.begin(), copy.end());
  return static_cast<std::size_t>(std::unique(copy.begin(), copy.end()) - copy.begin());
}

ojson model_json(const ClusterModel& m) {
  ojson j;
  j["k"] = m.k;
  j["seed"] = m.seed;
  j["iterations"] = m.iterations;
  j["inertia"] = m.inertia;
  j["sizes"] = m.cluster_sizes();
  j["centroids"] = m.centroids;
  return j;
}

}  // namespace

ClusterMode parse_cluster_mode(std::string_view name) {
  if (name == "combined") return ClusterMode::Combined;
  if (name == "per-class") return ClusterMode::PerClass;
  if (name == "both") return ClusterMode::Both;
  throw UsageError("unknown cluster mode '" + std::string(name) +
                   "' (expected combined, per-class or both)");
}

ClusterAnalysis analyze_clusters(std::span<const ClipRecord> clips,
                                 const std::map<std::string, PoseStream>& poses, ClusterMode mode,
                                 const KMeansOptions& options) {
  ClusterAnalysis out;
  const FrameSamples all = collect_frame_samples(clips, poses);
  out.total_frames = all.features.size();
  out.missing_frames = all.missing_frames;
  out.degenerate_frames = all.degenerate_frames;

  if (mode != ClusterMode::PerClass) {
    if (distinct(all.features) < options.k) {
      out.warnings.push_back("combined clustering skipped: fewer than k distinct frames");
    } else {
      out.combined = kmeans(all.features, options);
      out.combined_top = top_cluster_per_class(*out.combined, all.labels);
    }
  }
  if (mode != ClusterMode::Combined) {
    for (ClipLabel label : kClipLabels) {
      std::vector<FeatureVector> features;
      for (std::size_t i = 0; i < all.features.size(); ++i)
        if (all.labels[i] == label) features.push_back(all.features[i]);
      out.per_class_frames[label] = features.size();
      if (distinct(features) < options.k) {
        out.warnings.push_back(std::string(clip_label_name(label)) +
                               " clustering skipped: fewer than k distinct frames");
        continue;
      }
      out.per_class.emplace(label, kmeans(features, options));
    }
  }
  return out;
}

std::vector<std::string> write_cluster_analysis(const ClusterAnalysis& analysis,
                                                const std::string& json_path,
                                                const std::optional<std::string>& render_dir) {
  ojson doc;
  doc["frames"] = {{"clustered", analysis.total_frames},
                   {"missing", analysis.missing_frames},
                   {"degenerate", analysis.degenerate_frames}};
  if (analysis.combined) {
    ojson c = model_json(*analysis.combined);
    ojson top = ojson::array();
    for (const TopCluster& t : analysis.combined_top)
      top.push_back({{"label", clip_label_name(t.label)},
                     {"cluster", t.cluster},
                     {"fraction", t.fraction},
                     {"frames", t.frames}});
    c["top_clusters"] = std::move(top);
    doc["combined"] = std::move(c);
  }
  if (!analysis.per_class.empty() || !analysis.per_class_frames.empty()) {
    ojson per = ojson::object();
    for (const auto& [label, model] : analysis.per_class) {
      ojson m = model_json(model);
      m["frames"] = analysis.per_class_frames.at(label);
      per[clip_label_name(label)] = std::move(m);
    }
    doc["per_class"] = std::move(per);
  }
  doc["warnings"] = analysis.warnings;

  std::ofstream out(json_path, std::ios::binary);
  if (!out) throw ValidationError("cannot write '" + json_path + "'");
  out << doc.dump(1) << '\n';

  std::vector<std::string> written;
  if (!render_dir) return written;
  std::filesystem::create_directories(*render_dir);
  auto render_all = [&](const ClusterModel& m, const std::string& prefix) {
    for (std::size_t c = 0; c < m.centroids.size(); ++c) {
      const std::string name = prefix + "_cluster_" + std::to_string(c);
      const std::string path = (std::filesystem::path(*render_dir) / (name + ".svg")).string();
      render_centroid_file(m.centroids[c], path, name);
      written.push_back(path);
    }
  };
  if (analysis.combined) render_all(*analysis.combined, "combined");
  for (const auto& [label, model] : analysis.per_class) render_all(model, clip_label_name(label));
  return written;
}

}  // namespace sublabel::analysis
