#pragma once

#include <vector>

#include "pivotsense/core.hpp"

namespace pivotsense {

/// Segments shorter than this fraction of the pitch carry no direction.
inline constexpr double kDegenerateSegmentRatio = 0.01;

/// Per-marker local rotation: the mean signed direction change (degrees,
/// CCW positive, each in (-180, 180]) of the segments to the available
/// 4-neighbors. A marker is valid when at least two segments are usable.
LineFeatureAngles line_feature_angles(const MarkerGrid& grid, const Frame& frame);

/// Half the curl of the displacement increment (next - prev), in degrees.
/// Central differences in the interior, second-order one-sided differences
/// at the border (first-order when a side has only two markers).
std::vector<double> half_curl(const MarkerGrid& grid, const Frame& frame_prev, const Frame& frame_next);

/// Normalized angle difference used for stick admission:
///   |phi_i - phi_bar| / epsilon           if either magnitude <= epsilon
///   +inf                                  if the signs disagree
///   |phi_i - phi_bar| / sqrt(phi_i * phi_bar) otherwise
double normalized_angle_difference(double phi_i, double phi_bar, double epsilon = 0.05);

}  // namespace pivotsense
