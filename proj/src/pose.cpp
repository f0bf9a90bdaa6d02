#include "sublabel/pose.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "sublabel/error.hpp"
#include "text_util.hpp"

namespace sublabel {

namespace {

constexpr std::array<std::string_view, kLandmarkCount> kNames = {
    "NOSE",
    "LEFT_EYE_INNER", "LEFT_EYE", "LEFT_EYE_OUTER",
    "RIGHT_EYE_INNER", "RIGHT_EYE", "RIGHT_EYE_OUTER",
    "LEFT_EAR", "RIGHT_EAR",
    "MOUTH_LEFT", "MOUTH_RIGHT",
    "LEFT_SHOULDER", "RIGHT_SHOULDER",
    "LEFT_ELBOW", "RIGHT_ELBOW",
    "LEFT_WRIST", "RIGHT_WRIST",
    "LEFT_PINKY", "RIGHT_PINKY",
    "LEFT_INDEX", "RIGHT_INDEX",
    "LEFT_THUMB", "RIGHT_THUMB",
    "LEFT_HIP", "RIGHT_HIP",
    "LEFT_KNEE", "RIGHT_KNEE",
    "LEFT_ANKLE", "RIGHT_ANKLE",
    "LEFT_HEEL", "RIGHT_HEEL",
    "LEFT_FOOT_INDEX", "RIGHT_FOOT_INDEX",
};

double parse_double(std::string_view s, std::size_t line_no) {
  s = detail::trim(s);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ParseError("not a number: '" + std::string(s) + "'", line_no);
  return value;
}

std::string stem_of(const std::string& path) {
  return std::filesystem::path(path).stem().string();
}

}  // namespace

std::string_view landmark_name(LandmarkId id) { return kNames[static_cast<std::size_t>(id)]; }

std::string_view landmark_base_name(LandmarkId id) {
  std::string_view name = landmark_name(id);
  if (name.starts_with("LEFT_")) return name.substr(5);
  if (name.starts_with("RIGHT_")) return name.substr(6);
  if (name.starts_with("MOUTH_")) return name.substr(0, 5);
  return name;
}

Side landmark_side(LandmarkId id) {
  std::string_view name = landmark_name(id);
  if (name.starts_with("LEFT_") || name == "MOUTH_LEFT") return Side::Left;
  if (name.starts_with("RIGHT_") || name == "MOUTH_RIGHT") return Side::Right;
  return Side::Center;
}

std::string_view side_name(Side side) {
  switch (side) {
    case Side::Left: return "left";
    case Side::Right: return "right";
    default: return "center";
  }
}

PoseStream::PoseStream(std::string video_id, double fps, std::vector<PoseFrame> frames)
    : video_id_(std::move(video_id)), fps_(fps), frames_(std::move(frames)) {
  if (!(fps_ > 0.0) || !std::isfinite(fps_))
    throw ValidationError("fps must be positive, got " + std::to_string(fps_));
  for (std::size_t i = 0; i < frames_.size(); ++i) {
    const PoseFrame& f = frames_[i];
    if (i > 0 && f.frame_index <= frames_[i - 1].frame_index)
      throw ValidationError("frame " + std::to_string(f.frame_index) +
                            ": frame index not strictly increasing");
    for (std::size_t l = 0; l < kLandmarkCount; ++l) {
      double v = f.landmarks[l].visibility;
      if (!(v >= 0.0 && v <= 1.0))
        throw ValidationError("frame " + std::to_string(f.frame_index) + ": visibility of " +
                              std::string(kNames[l]) + " outside [0, 1]");
    }
  }
}

std::vector<std::int64_t> PoseStream::gaps() const {
  std::vector<std::int64_t> missing;
  for (std::size_t i = 1; i < frames_.size(); ++i)
    for (auto f = frames_[i - 1].frame_index + 1; f < frames_[i].frame_index; ++f)
      missing.push_back(f);
  return missing;
}

std::int64_t PoseStream::frame_extent() const {
  return frames_.empty() ? 0 : frames_.back().frame_index + 1;
}

double PoseStream::duration_seconds() const {
  if (frames_.empty()) return 0.0;
  auto span = frames_.back().frame_index - frames_.front().frame_index + 1;
  return static_cast<double>(span) / fps_;
}

const PoseFrame* PoseStream::find(std::int64_t frame_index) const {
  auto it = std::lower_bound(
      frames_.begin(), frames_.end(), frame_index,
      [](const PoseFrame& f, std::int64_t idx) { return f.frame_index < idx; });
  return it != frames_.end() && it->frame_index == frame_index ? &*it : nullptr;
}

std::vector<const PoseFrame*> PoseStream::frames_in(FrameRange range) const {
  std::vector<const PoseFrame*> out;
  auto it = std::lower_bound(
      frames_.begin(), frames_.end(), range.begin,
      [](const PoseFrame& f, std::int64_t idx) { return f.frame_index < idx; });
  for (; it != frames_.end() && it->frame_index < range.end; ++it) out.push_back(&*it);
  return out;
}

PoseStream read_poses_jsonl(std::istream& in, std::optional<double> fps,
                            std::optional<std::string> video_id) {
  std::vector<PoseFrame> frames;
  std::optional<double> header_fps;
  std::optional<std::string> header_id;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(std::string("bad pose record: ") + e.what(), line_no);
    }
    if (!j.is_object()) throw ParseError("pose record must be an object", line_no);
    if (!j.contains("frame")) {
      if (!frames.empty()) throw ParseError("header after the first frame", line_no);
      if (j.contains("fps")) header_fps = j["fps"].get<double>();
      if (j.contains("video_id")) header_id = j["video_id"].get<std::string>();
      continue;
    }
    PoseFrame f;
    try {
      f.frame_index = j.at("frame").get<std::int64_t>();
      const auto& lms = j.at("landmarks");
      if (!lms.is_array() || lms.size() != kLandmarkCount)
        throw ValidationError("frame " + std::to_string(f.frame_index) + ": expected " +
                              std::to_string(kLandmarkCount) + " landmarks, got " +
                              std::to_string(lms.is_array() ? lms.size() : 0));
      for (std::size_t l = 0; l < kLandmarkCount; ++l) {
        const auto& v = lms[l];
        if (!v.is_array() || v.size() != 4)
          throw ValidationError("frame " + std::to_string(f.frame_index) + ": landmark " +
                                std::to_string(l) + " must be [x, y, z, visibility]");
        f.landmarks[l] = Landmark{v[0].get<double>(), v[1].get<double>(), v[2].get<double>(),
                                  v[3].get<double>()};
      }
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("bad pose record: ") + e.what(), line_no);
    }
    frames.push_back(f);
  }
  return PoseStream(video_id.value_or(header_id.value_or("")), fps.value_or(header_fps.value_or(30.0)),
                    std::move(frames));
}

PoseStream read_poses_csv(std::istream& in, std::optional<double> fps,
                          std::optional<std::string> video_id) {
  constexpr std::size_t kColumns = 1 + kLandmarkCount * 4;
  std::vector<PoseFrame> frames;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (detail::trim(line).empty()) continue;
    std::vector<std::string_view> cells;
    std::string_view rest(line);
    while (true) {
      auto comma = rest.find(',');
      cells.push_back(rest.substr(0, comma));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    auto first = detail::trim(cells[0]);
    bool header = !first.empty() && !(std::isdigit(static_cast<unsigned char>(first[0])) ||
                                      first[0] == '-' || first[0] == '+');
    if (header && frames.empty()) continue;
    PoseFrame f;
    f.frame_index = static_cast<std::int64_t>(parse_double(cells[0], line_no));
    if (cells.size() != kColumns)
      throw ValidationError("frame " + std::to_string(f.frame_index) + ": expected " +
                            std::to_string(kColumns) + " columns, got " +
                            std::to_string(cells.size()));
    for (std::size_t l = 0; l < kLandmarkCount; ++l) {
      f.landmarks[l] = Landmark{parse_double(cells[1 + 4 * l], line_no),
                                parse_double(cells[2 + 4 * l], line_no),
                                parse_double(cells[3 + 4 * l], line_no),
                                parse_double(cells[4 + 4 * l], line_no)};
    }
    frames.push_back(f);
  }
  return PoseStream(video_id.value_or(""), fps.value_or(30.0), std::move(frames));
}

PoseStream load_poses(const std::string& path, std::optional<double> fps,
                      std::optional<std::string> video_id) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open pose file '" + path + "'");
  const bool csv = std::filesystem::path(path).extension() == ".csv";
  PoseStream stream = csv ? read_poses_csv(in, fps, video_id) : read_poses_jsonl(in, fps, video_id);
  if (stream.video_id().empty())
    stream = PoseStream(stem_of(path), stream.fps(), stream.frames());
  return stream;
}

void write_poses_jsonl(std::ostream& out, const PoseStream& stream) {
  nlohmann::ordered_json header;
  header["video_id"] = stream.video_id();
  header["fps"] = stream.fps();
  out << header.dump() << '\n';
  for (const PoseFrame& f : stream.frames()) {
    nlohmann::ordered_json j;
    j["frame"] = f.frame_index;
    auto lms = nlohmann::ordered_json::array();
    for (const Landmark& l : f.landmarks) lms.push_back({l.x, l.y, l.z, l.visibility});
    j["landmarks"] = std::move(lms);
    out << j.dump() << '\n';
  }
}

double mean_visibility(const PoseFrame& frame) {
  double sum = 0.0;
  for (const Landmark& l : frame.landmarks) sum += l.visibility;
  return sum / static_cast<double>(kLandmarkCount);
}

FrameRange time_to_frames(std::int64_t start_ms, std::int64_t end_ms, double fps) {
  auto to_frame = [fps](std::int64_t ms) {
    return static_cast<std::int64_t>(std::floor(static_cast<double>(ms) * fps / 1000.0));
  };
  return FrameRange{to_frame(start_ms), to_frame(end_ms)};
}

}  // namespace sublabel
