#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sublabel/analysis/clustering.hpp"

namespace sublabel::analysis {

enum class ClusterMode { Combined, PerClass, Both };

/// Throws UsageError unless "combined", "per-class" or "both".
ClusterMode parse_cluster_mode(std::string_view name);

/// Combined mode clusters all frames regardless of label and reports the
/// top cluster of every label. Per-class mode clusters each label's frames
/// separately with the same options.
struct ClusterAnalysis {
  std::size_t total_frames = 0;
  std::size_t missing_frames = 0;
  std::size_t degenerate_frames = 0;
  std::optional<ClusterModel> combined;
  std::vector<TopCluster> combined_top;
  std::map<ClipLabel, ClusterModel> per_class;
  std::map<ClipLabel, std::size_t> per_class_frames;
  std::vector<std::string> warnings;
};

/// A label (or the whole set) with fewer distinct frames than k is skipped
/// with a warning instead of failing.
ClusterAnalysis analyze_clusters(std::span<const ClipRecord> clips,
                                 const std::map<std::string, PoseStream>& poses, ClusterMode mode,
                                 const KMeansOptions& options);

/// clusters.json plus, with a render directory, one SVG per centroid named
/// combined_cluster_<i>.svg and <label>_cluster_<i>.svg. Returns the SVG
/// paths written.
std::vector<std::string> write_cluster_analysis(const ClusterAnalysis& analysis,
                                                const std::string& json_path,
                                                const std::optional<std::string>& render_dir);

}  // namespace sublabel::analysis
