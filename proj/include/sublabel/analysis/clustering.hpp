#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sublabel/clips.hpp"
#include "sublabel/pose.hpp"

namespace sublabel::analysis {

inline constexpr std::size_t kPoseFeatureDims = kLandmarkCount * 3;

using FeatureVector = std::vector<double>;

/// Hip midpoint moved to the origin, shoulder-to-hip midpoint distance
/// scaled to 1, then x, y, z of every landmark flattened. nullopt when the
/// torso length is (numerically) zero.
std::optional<FeatureVector> normalize_pose(const PoseFrame& frame);

struct KMeansOptions {
  std::size_t k = 6;
  std::uint64_t seed = 42;
  std::size_t max_iter = 300;
  double tol = 1e-6;
};

struct ClusterModel {
  std::size_t k = 0;
  std::uint64_t seed = 0;
  std::vector<FeatureVector> centroids;
  std::vector<std::size_t> assignments;
  double inertia = 0.0;
  // Inertia after every assignment step, first entry from the seeding.
  std::vector<double> inertia_history;
  std::size_t iterations = 0;

  std::vector<std::size_t> cluster_sizes() const;
  bool operator==(const ClusterModel&) const = default;
};

/// k-means++ seeding from a mt19937_64 stream, then Lloyd iterations until
/// the largest centroid shift drops below `tol`, assignments stop changing,
/// or `max_iter` is reached. An emptied cluster is reseeded at the point
/// farthest from its centroid. Ties go to the lower cluster id, so a fixed
/// seed gives bitwise-identical models. Throws ValidationError when there
/// are fewer than k distinct points.
ClusterModel kmeans(const std::vector<FeatureVector>& points, const KMeansOptions& options);

/// Normalized frames of the clips, labelled with their clip's label.
struct FrameSamples {
  std::vector<FeatureVector> features;
  std::vector<ClipLabel> labels;
  std::vector<std::string> clip_ids;
  std::vector<std::int64_t> frames;
  std::size_t missing_frames = 0;
  std::size_t degenerate_frames = 0;
};

/// `poses` is keyed by video id. With `only`, clips of other labels are skipped.
FrameSamples collect_frame_samples(std::span<const ClipRecord> clips,
                                   const std::map<std::string, PoseStream>& poses,
                                   std::optional<ClipLabel> only = std::nullopt);

struct TopCluster {
  ClipLabel label = ClipLabel::Irrelevant;
  std::size_t cluster = 0;
  double fraction = 0.0;
  std::size_t frames = 0;  // frames of this label in total
};

/// For each label present in `labels` (aligned with model.assignments), the
/// cluster holding the largest share of its frames; ties to the lower id.
/// Labels without frames are omitted.
std::vector<TopCluster> top_cluster_per_class(const ClusterModel& model,
                                              std::span<const ClipLabel> labels);

}  // namespace sublabel::analysis
