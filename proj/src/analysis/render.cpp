#include "sublabel/analysis/render.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <ostream>

#include "sublabel/error.hpp"

namespace sublabel::analysis {

namespace {

constexpr double kCanvas = 200.0;
constexpr double kMargin = 10.0;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v + 0.0);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

}  // namespace

const std::array<std::pair<LandmarkId, LandmarkId>, 35>& skeleton_edges() {
  using L = LandmarkId;
  static const std::array<std::pair<LandmarkId, LandmarkId>, 35> edges = {{
      {L::Nose, L::LeftEyeInner}, {L::LeftEyeInner, L::LeftEye}, {L::LeftEye, L::LeftEyeOuter},
      {L::LeftEyeOuter, L::LeftEar}, {L::Nose, L::RightEyeInner},
      {L::RightEyeInner, L::RightEye}, {L::RightEye, L::RightEyeOuter},
      {L::RightEyeOuter, L::RightEar}, {L::MouthLeft, L::MouthRight},
      {L::LeftShoulder, L::RightShoulder}, {L::LeftShoulder, L::LeftElbow},
      {L::LeftElbow, L::LeftWrist}, {L::LeftWrist, L::LeftPinky}, {L::LeftWrist, L::LeftIndex},
      {L::LeftWrist, L::LeftThumb}, {L::LeftPinky, L::LeftIndex},
      {L::RightShoulder, L::RightElbow}, {L::RightElbow, L::RightWrist},
      {L::RightWrist, L::RightPinky}, {L::RightWrist, L::RightIndex},
      {L::RightWrist, L::RightThumb}, {L::RightPinky, L::RightIndex},
      {L::LeftShoulder, L::LeftHip}, {L::RightShoulder, L::RightHip}, {L::LeftHip, L::RightHip},
      {L::LeftHip, L::LeftKnee}, {L::RightHip, L::RightKnee}, {L::LeftKnee, L::LeftAnkle},
      {L::RightKnee, L::RightAnkle}, {L::LeftAnkle, L::LeftHeel}, {L::RightAnkle, L::RightHeel},
      {L::LeftHeel, L::LeftFootIndex}, {L::RightHeel, L::RightFootIndex},
      {L::LeftAnkle, L::LeftFootIndex}, {L::RightAnkle, L::RightFootIndex},
  }};
  return edges;
}

void render_centroid(std::span<const double> centroid, std::ostream& out,
                     const std::string& title) {
  if (centroid.size() != kLandmarkCount * 3)
    throw ValidationError("centroid must have " + std::to_string(kLandmarkCount * 3) +
                          " values, got " + std::to_string(centroid.size()));
  double min_x = centroid[0], max_x = centroid[0];
  double min_y = centroid[1], max_y = centroid[1];
  for (std::size_t l = 0; l < kLandmarkCount; ++l) {
    min_x = std::min(min_x, centroid[3 * l]);
    max_x = std::max(max_x, centroid[3 * l]);
    min_y = std::min(min_y, centroid[3 * l + 1]);
    max_y = std::max(max_y, centroid[3 * l + 1]);
  }
  const double extent = std::max(max_x - min_x, max_y - min_y);
  const double scale = extent > 1e-12 ? (kCanvas - 2 * kMargin) / extent : 1.0;
  const double cx = (min_x + max_x) / 2.0;
  const double cy = (min_y + max_y) / 2.0;
  auto px = [&](std::size_t l) { return kCanvas / 2 + (centroid[3 * l] - cx) * scale; };
  auto py = [&](std::size_t l) { return kCanvas / 2 + (centroid[3 * l + 1] - cy) * scale; };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"200\" height=\"200\" "
         "viewBox=\"0 0 200 200\">\n";
  if (!title.empty()) out << "  <title>" << escape(title) << "</title>\n";
  out << "  <rect width=\"200\" height=\"200\" fill=\"white\"/>\n";
  out << "  <g stroke=\"black\" stroke-width=\"2\" stroke-linecap=\"round\">\n";
  for (const auto& [a, b] : skeleton_edges()) {
    const auto i = static_cast<std::size_t>(a);
    const auto j = static_cast<std::size_t>(b);
    out << "    <line x1=\"" << fmt(px(i)) << "\" y1=\"" << fmt(py(i)) << "\" x2=\"" << fmt(px(j))
        << "\" y2=\"" << fmt(py(j)) << "\"/>\n";
  }
  out << "  </g>\n  <g fill=\"red\">\n";
  for (std::size_t l = 0; l < kLandmarkCount; ++l)
    out << "    <circle cx=\"" << fmt(px(l)) << "\" cy=\"" << fmt(py(l)) << "\" r=\"2\"/>\n";
  out << "  </g>\n</svg>\n";
}

void render_centroid_file(std::span<const double> centroid, const std::string& path,
                          const std::string& title) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write '" + path + "'");
  render_centroid(centroid, out, title);
}

}  // namespace sublabel::analysis
