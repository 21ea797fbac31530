#include "pivotsense/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "pivotsense/feature_angles.hpp"

namespace pivotsense {

namespace {

double theta_from_angle(double mean_angle, const SoftnessParams& softness) {
    if (softness.is_rigid()) return -mean_angle;
    return -(softness.k + 1.0) * mean_angle + 0.5 * (softness.l_xy - softness.l_yx);
}

}  // namespace

RotationEstimate estimate_rotation(const StickRegion& region, const SoftnessParams& softness) {
    softness.validate();
    RotationEstimate est;
    est.state = region.state;
    est.stick_ratio = region.stick_ratio;
    if (region.state != ContactState::NoContact) {
        est.theta = theta_from_angle(region.mean_angle, softness);
    }
    return est;
}

RotationEstimate baseline_least_squares(const MarkerGrid& grid, const Frame& frame, const ContactMask& mask) {
    frame.validate(grid);
    if (mask.flags.size() != grid.size()) throw UsageError("contact mask does not match the grid");
    if (!mask.contact_detected) throw InsufficientDataError("least-squares baseline needs a detected contact");

    std::vector<MarkerIndex> used;
    for (MarkerIndex i = 0; i < grid.size(); ++i) {
        if (mask.flags[i]) used.push_back(i);
    }
    if (used.size() < 3) {
        throw InsufficientDataError("least-squares baseline needs at least 3 contact markers, got " +
                                    std::to_string(used.size()));
    }

    RotationEstimate est;
    est.state = ContactState::Stick;
    est.stick_ratio = 1.0;

    const Vec2 first = frame.displacements[used.front()].tangential();
    const bool uniform = std::all_of(used.begin(), used.end(), [&](MarkerIndex i) {
        return frame.displacements[i].tangential() == first;
    });
    if (uniform) return est;

    const double n = static_cast<double>(used.size());
    Vec2 src_mean;
    Vec2 dst_mean;
    for (auto i : used) {
        const Vec2 p = grid.reference_position(i);
        src_mean = src_mean + p;
        dst_mean = dst_mean + (p + frame.displacements[i].tangential());
    }
    src_mean = (1.0 / n) * src_mean;
    dst_mean = (1.0 / n) * dst_mean;

    double sin_part = 0.0;
    double cos_part = 0.0;
    for (auto i : used) {
        const Vec2 p = grid.reference_position(i);
        const Vec2 src = p - src_mean;
        const Vec2 dst = (p + frame.displacements[i].tangential()) - dst_mean;
        sin_part += cross(src, dst);
        cos_part += dot(src, dst);
    }
    const double alpha = std::atan2(sin_part, cos_part);
    est.theta = -rad_to_deg(alpha);

    // Fixed point of p -> R p + t, solved with 1 - cos(alpha) = 2 sin^2(alpha / 2).
    const double half_sin = std::sin(0.5 * alpha);
    const double one_minus_cos = 2.0 * half_sin * half_sin;
    const double s = std::sin(alpha);
    const double det = one_minus_cos * one_minus_cos + s * s;
    if (std::abs(alpha) > 1e-12 && det > 0.0) {
        const Vec2 rotated_mean = rotate(src_mean, rad_to_deg(alpha));
        const Vec2 t = dst_mean - rotated_mean;
        est.cor = Vec2{(one_minus_cos * t.x - s * t.y) / det, (s * t.x + one_minus_cos * t.y) / det};
    }
    return est;
}

std::pair<EstimatorState, RotationEstimate> filter_step(EstimatorState state, const RotationEstimate& raw,
                                                        bool contact_now, double timestamp) {
    if (!std::isfinite(timestamp)) throw UsageError("filter timestamp is not finite");
    if (timestamp < state.last_timestamp) {
        throw UsageError("frames out of order: t = " + std::to_string(timestamp) + " after t = " +
                         std::to_string(state.last_timestamp));
    }
    state.last_timestamp = timestamp;
    ++state.frames_seen;

    RotationEstimate out = raw;
    out.cor.reset();
    if (!state.contact_seen && !contact_now) {
        ++state.pre_contact_frames;
        state.zero_drift += (raw.theta - state.zero_drift) / static_cast<double>(state.pre_contact_frames);
        out.theta = 0.0;
        return {std::move(state), out};
    }

    state.contact_seen = true;
    state.window.push_back(raw.theta);
    while (state.window.size() > kFilterWindow) state.window.pop_front();
    const double mean = std::accumulate(state.window.begin(), state.window.end(), 0.0) /
                        static_cast<double>(state.window.size());
    out.theta = out.state == ContactState::NoContact ? 0.0 : mean - state.zero_drift;
    return {std::move(state), out};
}

Pipeline::Pipeline(MarkerGrid grid, SegmentationConfig cfg, SoftnessParams softness)
    : grid_(std::move(grid)), cfg_(cfg), softness_(softness) {
    cfg_.validate();
    softness_.validate();
}

FrameOutput Pipeline::estimate_static(const Frame& frame) const {
    FrameOutput out;
    out.mask = detect_contact(grid_, frame, cfg_);
    const LineFeatureAngles angles = line_feature_angles(grid_, frame);
    out.region = grow_stick_region(grid_, out.mask, angles, cfg_);
    out.raw = estimate_rotation(out.region, softness_);
    out.filtered = out.raw;
    return out;
}

FrameOutput Pipeline::process_frame(const Frame& frame) {
    if (frame.timestamp < state_.last_timestamp) {
        throw UsageError("frames out of order: t = " + std::to_string(frame.timestamp));
    }
    FrameOutput out;
    out.mask = detect_contact(grid_, frame, cfg_);
    const LineFeatureAngles angles = line_feature_angles(grid_, frame);
    out.region = grow_stick_region(grid_, out.mask, angles, cfg_);
    out.raw = estimate_rotation(out.region, softness_);

    RotationEstimate filter_input = out.raw;
    if (!out.mask.contact_detected && !state_.contact_seen) {
        // Drift probe: what the estimator would read if the whole sensor stuck.
        double sum = 0.0;
        std::size_t n = 0;
        for (MarkerIndex i = 0; i < grid_.size(); ++i) {
            if (angles.valid[i]) {
                sum += angles.angles[i];
                ++n;
            }
        }
        filter_input.theta = n > 0 ? theta_from_angle(sum / static_cast<double>(n), softness_) : 0.0;
    }
    auto [next, filtered] = filter_step(std::move(state_), filter_input, out.mask.contact_detected, frame.timestamp);
    state_ = std::move(next);
    out.filtered = filtered;
    return out;
}

}  // namespace pivotsense
