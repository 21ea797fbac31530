#pragma once

#include <cstddef>

#include "pivotsense/core.hpp"

namespace pivotsense {

struct SegmentationConfig {
    double contact_threshold = 0.1;   // mm, stick-center deformation needed to declare contact
    double normal_filter_ratio = 0.5; // fraction of the peak normal displacement
    double delta_phi_th = 0.4;        // stick admission threshold on the normalized difference
    std::size_t min_stick_markers = 3;
    double epsilon_angle = 0.05;      // degrees, angular noise floor

    void validate() const;
};

/// Flags markers by normal displacement, picks the stick center, and decides
/// whether contact has occurred. Flags are cleared when it has not.
ContactMask detect_contact(const MarkerGrid& grid, const Frame& frame, const SegmentationConfig& cfg);

/// Grows the stick region from the mask's center over flagged, valid
/// markers. Each frontier marker is tested once, nearest-to-center first.
StickRegion grow_stick_region(const MarkerGrid& grid, const ContactMask& mask, const LineFeatureAngles& angles,
                              const SegmentationConfig& cfg);

}  // namespace pivotsense
