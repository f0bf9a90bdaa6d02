#include "sublabel/analysis/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "sublabel/error.hpp"

namespace sublabel::analysis {

namespace {

double squared_distance(const FeatureVector& a, const FeatureVector& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    d += diff * diff;
  }
  return d;
}

// Uniform in [0, 1) from the top 53 bits; independent of the standard
// library's distribution implementations.
double uniform01(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

std::size_t distinct_count(const std::vector<FeatureVector>& points) {
  std::vector<const FeatureVector*> sorted;
  for (const auto& p : points) sorted.push_back(&p);
  std::sort(sorted.begin(), sorted.end(),
            [](const FeatureVector* a, const FeatureVector* b) { return *a < *b; });
  auto last = std::unique(sorted.begin(), sorted.end(),
                          [](const FeatureVector* a, const FeatureVector* b) { return *a == *b; });
  return static_cast<std::size_t>(last - sorted.begin());
}

std::vector<FeatureVector> seed_plus_plus(const std::vector<FeatureVector>& points, std::size_t k,
                                          std::mt19937_64& gen) {
  const std::size_t n = points.size();
  std::vector<FeatureVector> centroids;
  auto first = std::min(n - 1, static_cast<std::size_t>(uniform01(gen) * static_cast<double>(n)));
  centroids.push_back(points[first]);

  std::vector<double> nearest(n);
  for (std::size_t i = 0; i < n; ++i) nearest[i] = squared_distance(points[i], centroids[0]);

  while (centroids.size() < k) {
    double total = 0.0;
    for (double d : nearest) total += d;
    if (!(total > 0.0)) throw ValidationError("k-means++ ran out of distinct points");
    const double target = uniform01(gen) * total;
    double running = 0.0;
    std::size_t pick = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (nearest[i] <= 0.0) continue;
      running += nearest[i];
      pick = i;
      if (running > target) break;
    }
    centroids.push_back(points[pick]);
    for (std::size_t i = 0; i < n; ++i)
      nearest[i] = std::min(nearest[i], squared_distance(points[i], centroids.back()));
  }
  return centroids;
}

// Returns inertia; ties go to the lowest centroid id.
double assign(const std::vector<FeatureVector>& points, const std::vector<FeatureVector>& centroids,
              std::vector<std::size_t>& assignments) {
  double inertia = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < centroids.size(); ++c) {
      const double d = squared_distance(points[i], centroids[c]);
      if (d < best_d) {
        best_d = d;
        best = c;
      }
    }
    assignments[i] = best;
    inertia += best_d;
  }
  return inertia;
}

}  // namespace

std::optional<FeatureVector> normalize_pose(const PoseFrame& frame) {
  auto mid = [&](LandmarkId a, LandmarkId b, auto member) {
    return (frame[a].*member + frame[b].*member) / 2.0;
  };
  const double hx = mid(LandmarkId::LeftHip, LandmarkId::RightHip, &Landmark::x);
  const double hy = mid(LandmarkId::LeftHip, LandmarkId::RightHip, &Landmark::y);
  const double hz = mid(LandmarkId::LeftHip, LandmarkId::RightHip, &Landmark::z);
  const double sx = mid(LandmarkId::LeftShoulder, LandmarkId::RightShoulder, &Landmark::x);
  const double sy = mid(LandmarkId::LeftShoulder, LandmarkId::RightShoulder, &Landmark::y);
  const double sz = mid(LandmarkId::LeftShoulder, LandmarkId::RightShoulder, &Landmark::z);
  const double torso = std::sqrt((sx - hx) * (sx - hx) + (sy - hy) * (sy - hy) + (sz - hz) * (sz - hz));
  if (!(torso > 1e-12) || !std::isfinite(torso)) return std::nullopt;

  FeatureVector out;
  out.reserve(kPoseFeatureDims);
  for (const Landmark& l : frame.landmarks) {
    out.push_back((l.x - hx) / torso);
    out.push_back((l.y - hy) / torso);
    out.push_back((l.z - hz) / torso);
  }
  return out;
}

std::vector<std::size_t> ClusterModel::cluster_sizes() const {
  std::vector<std::size_t> sizes(k, 0);
  for (std::size_t a : assignments) ++sizes[a];
  return sizes;
}

ClusterModel kmeans(const std::vector<FeatureVector>& points, const KMeansOptions& options) {
  if (options.k == 0) throw ValidationError("k must be >= 1");
  if (points.empty()) throw ValidationError("k-means needs at least one point");
  const std::size_t dims = points.front().size();
  for (const auto& p : points)
    if (p.size() != dims) throw ValidationError("feature vectors differ in length");
  if (distinct_count(points) < options.k)
    throw ValidationError("fewer than k = " + std::to_string(options.k) + " distinct points");

  std::mt19937_64 gen(options.seed);
  ClusterModel model;
  model.k = options.k;
  model.seed = options.seed;
  model.centroids = seed_plus_plus(points, options.k, gen);
  model.assignments.assign(points.size(), 0);
  model.inertia = assign(points, model.centroids, model.assignments);
  model.inertia_history.push_back(model.inertia);

  const std::size_t n = points.size();
  while (model.iterations < options.max_iter) {
    std::vector<FeatureVector> next(options.k, FeatureVector(dims, 0.0));
    std::vector<std::size_t> counts(options.k, 0);
    for (std::size_t i = 0; i < n; ++i) {
      auto& c = next[model.assignments[i]];
      for (std::size_t d = 0; d < dims; ++d) c[d] += points[i][d];
      ++counts[model.assignments[i]];
    }
    for (std::size_t c = 0; c < options.k; ++c)
      if (counts[c] > 0)
        for (double& v : next[c]) v /= static_cast<double>(counts[c]);

    std::vector<bool> taken(n, false);
    for (std::size_t c = 0; c < options.k; ++c) {
      if (counts[c] > 0) continue;
      std::size_t far = n;
      double far_d = -1.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (taken[i]) continue;
        const double d = squared_distance(points[i], next[model.assignments[i]]);
        if (d > far_d) {
          far_d = d;
          far = i;
        }
      }
      taken[far] = true;
      next[c] = points[far];
    }

    double shift = 0.0;
    for (std::size_t c = 0; c < options.k; ++c)
      shift = std::max(shift, std::sqrt(squared_distance(model.centroids[c], next[c])));
    model.centroids = std::move(next);

    const auto previous = model.assignments;
    model.inertia = assign(points, model.centroids, model.assignments);
    model.inertia_history.push_back(model.inertia);
    ++model.iterations;
    if (shift < options.tol || model.assignments == previous) break;
  }
  return model;
}

FrameSamples collect_frame_samples(std::span<const ClipRecord> clips,
                                   const std::map<std::string, PoseStream>& poses,
                                   std::optional<ClipLabel> only) {
  FrameSamples out;
  for (const ClipRecord& clip : clips) {
    if (only && clip.label != *only) continue;
    auto it = poses.find(clip.video_id);
    if (it == poses.end()) {
      out.missing_frames += static_cast<std::size_t>(clip.length_frames());
      continue;
    }
    const auto frames = it->second.frames_in(FrameRange{clip.frame_start, clip.frame_end});
    out.missing_frames += static_cast<std::size_t>(clip.length_frames()) - frames.size();
    for (const PoseFrame* f : frames) {
      auto feature = normalize_pose(*f);
      if (!feature) {
        ++out.degenerate_frames;
        continue;
      }
      out.features.push_back(std::move(*feature));
      out.labels.push_back(clip.label);
      out.clip_ids.push_back(clip.clip_id);
      out.frames.push_back(f->frame_index);
    }
  }
  return out;
}

std::vector<TopCluster> top_cluster_per_class(const ClusterModel& model,
                                              std::span<const ClipLabel> labels) {
  if (labels.size() != model.assignments.size())
    throw ValidationError("labels and cluster assignments differ in length");
  std::vector<TopCluster> out;
  for (ClipLabel label : kClipLabels) {
    std::vector<std::size_t> counts(model.k, 0);
    std::size_t total = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] != label) continue;
      ++counts[model.assignments[i]];
      ++total;
    }
    if (total == 0) continue;
    const auto best = static_cast<std::size_t>(
        std::max_element(counts.begin(), counts.end()) - counts.begin());
    out.push_back(TopCluster{label, best,
                             static_cast<double>(counts[best]) / static_cast<double>(total), total});
  }
  return out;
}

}  // namespace sublabel::analysis
