#pragma once

#include <array>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>

#include "sublabel/pose.hpp"

namespace sublabel::analysis {

/// Skeleton edges of the 33-landmark body model.
const std::array<std::pair<LandmarkId, LandmarkId>, 35>& skeleton_edges();

/// Draws the x-y projection of a 99-value centroid (x, y, z per landmark)
/// as an SVG stick figure scaled into a fixed 200x200 canvas. Image y grows
/// downward, as in normalized pose coordinates. Output is byte-stable for a
/// given centroid. Throws ValidationError on a wrong length.
void render_centroid(std::span<const double> centroid, std::ostream& out,
                     const std::string& title = "");
void render_centroid_file(std::span<const double> centroid, const std::string& path,
                          const std::string& title = "");

}  // namespace sublabel::analysis
