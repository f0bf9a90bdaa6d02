#include "sublabel/analysis/visibility.hpp"

#include <cstdio>
#include <ostream>

namespace sublabel::analysis {

VisibilityTable clip_landmark_visibility(std::span<const ClipRecord> clips,
                                         const std::map<std::string, PoseStream>& poses) {
  VisibilityTable table;
  for (const ClipRecord& clip : clips) {
    auto it = poses.find(clip.video_id);
    if (it == poses.end()) {
      table.excluded.push_back(clip.clip_id + ": no pose stream for video " + clip.video_id);
      continue;
    }
    const auto frames = it->second.frames_in(FrameRange{clip.frame_start, clip.frame_end});
    if (frames.empty()) {
      table.excluded.push_back(clip.clip_id + ": no pose frames");
      continue;
    }
    ClipVisibility row{clip.clip_id, clip.video_id, clip.label, frames.size(), {}};
    for (const PoseFrame* f : frames)
      for (std::size_t l = 0; l < kLandmarkCount; ++l) row.mean[l] += f->landmarks[l].visibility;
    bool recognized = true;
    for (double& m : row.mean) {
      m /= static_cast<double>(frames.size());
      recognized = recognized && m > 0.0;
    }
    if (!recognized) {
      table.excluded.push_back(clip.clip_id + ": not all landmarks recognized");
      continue;
    }
    table.rows.push_back(row);
  }
  return table;
}

const std::array<LandmarkId, kLandmarkCount>& table_order() {
  static const std::array<LandmarkId, kLandmarkCount> order = [] {
    using L = LandmarkId;
    return std::array<LandmarkId, kLandmarkCount>{
        L::Nose,
        L::LeftEyeInner, L::RightEyeInner,
        L::LeftEye, L::RightEye,
        L::LeftEyeOuter, L::RightEyeOuter,
        L::LeftEar, L::RightEar,
        L::MouthLeft, L::MouthRight,
        L::LeftShoulder, L::RightShoulder,
        L::LeftElbow, L::RightElbow,
        L::LeftWrist, L::RightWrist,
        L::LeftPinky, L::RightPinky,
        L::LeftIndex, L::RightIndex,
        L::LeftThumb, L::RightThumb,
        L::LeftHip, L::RightHip,
        L::LeftKnee, L::RightKnee,
        L::LeftAnkle, L::RightAnkle,
        L::LeftHeel, L::RightHeel,
        L::LeftFootIndex, L::RightFootIndex};
  }();
  return order;
}

std::vector<std::optional<RankSumResult>> compare_visibility(const VisibilityTable& table) {
  std::vector<std::optional<RankSumResult>> results;
  for (LandmarkId id : table_order()) {
    const auto l = static_cast<std::size_t>(id);
    std::vector<double> irrelevant;
    std::vector<double> relevant;
    for (const ClipVisibility& row : table.rows)
      (row.label == ClipLabel::Irrelevant ? irrelevant : relevant).push_back(row.mean[l]);
    if (irrelevant.empty() || relevant.empty()) {
      results.emplace_back();
      continue;
    }
    const RankSumTest t = rank_sum_test(irrelevant, relevant);
    results.push_back(RankSumResult{id, t.delta_median, t.p_value, t.n_a, t.n_b});
  }
  return results;
}

void write_visibility_csv(std::ostream& out,
                          const std::vector<std::optional<RankSumResult>>& results) {
  out << "landmark,side,delta_median,p_value,significant\n";
  const auto& order = table_order();
  for (std::size_t i = 0; i < order.size(); ++i) {
    out << landmark_base_name(order[i]) << ',' << side_name(landmark_side(order[i])) << ',';
    if (i >= results.size() || !results[i]) {
      out << "NA,NA,NA\n";
      continue;
    }
    char buf[64];
    // +0.0 folds a negative zero so identical medians print as 0.000000.
    std::snprintf(buf, sizeof buf, "%.6f,%.6f", results[i]->delta_median + 0.0,
                  results[i]->p_value);
    out << buf << ',' << (results[i]->significant() ? "true" : "false") << '\n';
  }
}

}  // namespace sublabel::analysis
