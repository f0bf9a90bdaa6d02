#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sublabel {

inline constexpr std::size_t kLandmarkCount = 33;

/// Full-body landmark codes in the usual 33-point BlazePose order.
enum class LandmarkId : std::uint8_t {
  Nose = 0,
  LeftEyeInner, LeftEye, LeftEyeOuter,
  RightEyeInner, RightEye, RightEyeOuter,
  LeftEar, RightEar,
  MouthLeft, MouthRight,
  LeftShoulder, RightShoulder,
  LeftElbow, RightElbow,
  LeftWrist, RightWrist,
  LeftPinky, RightPinky,
  LeftIndex, RightIndex,
  LeftThumb, RightThumb,
  LeftHip, RightHip,
  LeftKnee, RightKnee,
  LeftAnkle, RightAnkle,
  LeftHeel, RightHeel,
  LeftFootIndex, RightFootIndex,
};

enum class Side { Center, Left, Right };

/// "LEFT_EYE_INNER", "MOUTH_LEFT", ...
std::string_view landmark_name(LandmarkId id);
/// Side-free row name used in visibility tables: "EYE_INNER", "MOUTH", ...
std::string_view landmark_base_name(LandmarkId id);
Side landmark_side(LandmarkId id);
std::string_view side_name(Side side);

struct Landmark {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double visibility = 0.0;

  bool operator==(const Landmark&) const = default;
};

struct PoseFrame {
  std::int64_t frame_index = 0;
  std::array<Landmark, kLandmarkCount> landmarks{};

  const Landmark& operator[](LandmarkId id) const {
    return landmarks[static_cast<std::size_t>(id)];
  }
  Landmark& operator[](LandmarkId id) { return landmarks[static_cast<std::size_t>(id)]; }

  bool operator==(const PoseFrame&) const = default;
};

/// Half-open frame range.
struct FrameRange {
  std::int64_t begin = 0;
  std::int64_t end = 0;

  std::int64_t size() const { return end > begin ? end - begin : 0; }
  bool empty() const { return end <= begin; }
  bool operator==(const FrameRange&) const = default;
};

class PoseStream {
public:
  PoseStream() = default;
  /// Throws ValidationError when fps <= 0, frame indices are not strictly
  /// increasing, or a visibility lies outside [0, 1].
  PoseStream(std::string video_id, double fps, std::vector<PoseFrame> frames);

  const std::string& video_id() const { return video_id_; }
  double fps() const { return fps_; }
  const std::vector<PoseFrame>& frames() const { return frames_; }
  std::size_t size() const { return frames_.size(); }
  bool empty() const { return frames_.empty(); }

  /// Missing frame indices between the first and last frame.
  std::vector<std::int64_t> gaps() const;
  /// One past the last frame index (0 for an empty stream).
  std::int64_t frame_extent() const;
  /// Span of frame indices covered, in seconds.
  double duration_seconds() const;

  const PoseFrame* find(std::int64_t frame_index) const;
  /// Frames whose index lies in `range`, in order.
  std::vector<const PoseFrame*> frames_in(FrameRange range) const;

  bool operator==(const PoseStream&) const = default;

private:
  std::string video_id_;
  double fps_ = 30.0;
  std::vector<PoseFrame> frames_;
};

/// Loads a JSONL pose file ({"frame", "landmarks": [[x,y,z,v] x 33]} per
/// line, optional leading {"video_id", "fps"} header) or a CSV file with 133
/// columns (frame + 33 x 4, optional header row). CSV is selected by a
/// ".csv" extension. `fps` and `video_id` override the header; when neither
/// supplies them fps defaults to 30 and the id to the file stem.
PoseStream load_poses(const std::string& path, std::optional<double> fps = std::nullopt,
                      std::optional<std::string> video_id = std::nullopt);
PoseStream read_poses_jsonl(std::istream& in, std::optional<double> fps,
                            std::optional<std::string> video_id);
PoseStream read_poses_csv(std::istream& in, std::optional<double> fps,
                          std::optional<std::string> video_id);
/// Writes the header line and one frame per line; read_poses_jsonl restores
/// an identical stream.
void write_poses_jsonl(std::ostream& out, const PoseStream& stream);

double mean_visibility(const PoseFrame& frame);

/// [floor(start_ms * fps / 1000), floor(end_ms * fps / 1000)).
FrameRange time_to_frames(std::int64_t start_ms, std::int64_t end_ms, double fps);

}  // namespace sublabel
