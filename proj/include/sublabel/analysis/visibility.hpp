#pragma once

#include <array>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sublabel/analysis/rank_sum.hpp"
#include "sublabel/clips.hpp"
#include "sublabel/pose.hpp"

namespace sublabel::analysis {

inline constexpr double kSignificanceLevel = 0.05;

struct ClipVisibility {
  std::string clip_id;
  std::string video_id;
  ClipLabel label = ClipLabel::Irrelevant;
  std::size_t frames = 0;
  std::array<double, kLandmarkCount> mean{};
};

struct VisibilityTable {
  std::vector<ClipVisibility> rows;
  // "clip_id: reason" for every clip left out.
  std::vector<std::string> excluded;
};

/// Mean visibility per clip and landmark over the clip's frames present in
/// the pose stream of its video. Clips without frames, and clips where some
/// landmark never registers (mean visibility 0), are excluded.
VisibilityTable clip_landmark_visibility(std::span<const ClipRecord> clips,
                                         const std::map<std::string, PoseStream>& poses);

struct RankSumResult {
  LandmarkId landmark = LandmarkId::Nose;
  // median(irrelevant) - median(relevant): negative when the landmark is
  // less visible in irrelevant clips.
  double delta_median = 0.0;
  double p_value = 1.0;
  std::size_t n_a = 0;  // irrelevant clips
  std::size_t n_b = 0;  // relevant clips
  bool significant() const { return p_value < kSignificanceLevel; }
};

/// Landmarks in table order: NOSE, then left/right pairs from EYE_INNER down
/// to FOOT_INDEX.
const std::array<LandmarkId, kLandmarkCount>& table_order();

/// One rank-sum test per landmark, irrelevant clips against relevant
/// (correct + incorrect) clips. nullopt entries mark landmarks that could
/// not be tested because a group is empty.
std::vector<std::optional<RankSumResult>> compare_visibility(const VisibilityTable& table);

/// CSV: landmark,side,delta_median,p_value,significant in table order;
/// untestable rows carry NA.
void write_visibility_csv(std::ostream& out,
                          const std::vector<std::optional<RankSumResult>>& results);

}  // namespace sublabel::analysis
