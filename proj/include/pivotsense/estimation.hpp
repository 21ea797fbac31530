#pragma once

#include <cstddef>
#include <deque>
#include <limits>
#include <utility>

#include "pivotsense/core.hpp"
#include "pivotsense/segmentation.hpp"

namespace pivotsense {

/// Object rotation from the stick region's mean line-feature angle:
/// theta = -(k + 1) * mean + (l_xy - l_yx) / 2, which reduces to -mean for a
/// rigid object. Forced to zero without contact.
RotationEstimate estimate_rotation(const StickRegion& region, const SoftnessParams& softness = {});

/// Least-squares rigid fit (rotation about an unknown center plus
/// translation) of every flagged marker's tangential displacement. Slipping
/// markers are not excluded.
///
/// Throws InsufficientDataError without contact or with fewer than three
/// flagged markers. When all displacements coincide the result is theta = 0
/// with no center of rotation.
RotationEstimate baseline_least_squares(const MarkerGrid& grid, const Frame& frame, const ContactMask& mask);

inline constexpr std::size_t kFilterWindow = 5;

/// Causal moving-mean filter with zero-drift compensation.
struct EstimatorState {
    std::deque<double> window;  // most recent raw thetas after first contact
    double zero_drift = 0.0;    // mean raw theta before first contact
    std::size_t frames_seen = 0;
    std::size_t pre_contact_frames = 0;
    bool contact_seen = false;
    double last_timestamp = -std::numeric_limits<double>::infinity();
};

/// Before the first contact the raw theta is folded into the drift estimate
/// and the output is zero. From the first contact on, the drift is frozen and
/// the output is the window mean minus the drift. NoContact outputs are
/// always zero.
std::pair<EstimatorState, RotationEstimate> filter_step(EstimatorState state, const RotationEstimate& raw,
                                                        bool contact_now, double timestamp);

struct FrameOutput {
    RotationEstimate raw;
    RotationEstimate filtered;
    ContactMask mask;
    StickRegion region;
};

/// Streaming pipeline: contact detection, line-feature angles, stick-region
/// growth, rotation estimate, temporal filter. One instance per stream.
class Pipeline {
  public:
    Pipeline(MarkerGrid grid, SegmentationConfig cfg = {}, SoftnessParams softness = {});

    FrameOutput process_frame(const Frame& frame);

    /// Single-frame estimate without touching the filter state.
    FrameOutput estimate_static(const Frame& frame) const;

    const MarkerGrid& grid() const { return grid_; }
    const EstimatorState& filter_state() const { return state_; }
    void reset() { state_ = {}; }

  private:
    MarkerGrid grid_;
    SegmentationConfig cfg_;
    SoftnessParams softness_;
    EstimatorState state_;
};

}  // namespace pivotsense
