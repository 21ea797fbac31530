#include "pivotsense/segmentation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>
#include <tuple>
#include <vector>

#include "pivotsense/feature_angles.hpp"

namespace pivotsense {

namespace {

constexpr double kMagnitudeFloor = 1e-6;  // mm
constexpr double kScoreTieTolerance = 1e-12;

}  // namespace

void SegmentationConfig::validate() const {
    auto positive = [](double v) { return v > 0.0 && std::isfinite(v); };
    if (!positive(contact_threshold)) throw UsageError("contact_threshold must be positive");
    if (!(normal_filter_ratio > 0.0 && normal_filter_ratio < 1.0)) {
        throw UsageError("normal_filter_ratio must lie in (0, 1)");
    }
    if (!(delta_phi_th > 0.0)) throw UsageError("delta_phi_th must be positive");
    if (min_stick_markers == 0) throw UsageError("min_stick_markers must be positive");
    if (!positive(epsilon_angle)) throw UsageError("epsilon_angle must be positive");
}

ContactMask detect_contact(const MarkerGrid& grid, const Frame& frame, const SegmentationConfig& cfg) {
    cfg.validate();
    frame.validate(grid);
    const auto& d = frame.displacements;

    ContactMask mask;
    mask.flags.assign(grid.size(), false);

    double peak = 0.0;
    for (const auto& v : d) peak = std::max(peak, v.z);
    if (!(peak > 0.0)) return mask;

    const double cutoff = cfg.normal_filter_ratio * peak;
    Vec2 centroid;
    double mean_magnitude = 0.0;
    std::size_t count = 0;
    for (MarkerIndex i = 0; i < grid.size(); ++i) {
        if (d[i].z >= cutoff) {
            mask.flags[i] = true;
            centroid = centroid + grid.reference_position(i);
            mean_magnitude += norm(d[i].tangential());
            ++count;
        }
    }
    centroid = (1.0 / static_cast<double>(count)) * centroid;
    mean_magnitude /= static_cast<double>(count);

    // Near the flagged centroid and moving like the average flagged marker.
    std::optional<MarkerIndex> best;
    double best_score = 0.0;
    for (MarkerIndex i = 0; i < grid.size(); ++i) {
        if (!mask.flags[i]) continue;
        const double score = norm(grid.reference_position(i) - centroid) / grid.pitch() +
                             std::abs(norm(d[i].tangential()) - mean_magnitude) / (mean_magnitude + kMagnitudeFloor);
        if (!best || score < best_score - kScoreTieTolerance * std::max(1.0, std::abs(best_score))) {
            best = i;
            best_score = score;
        }
    }

    if (norm(d[*best]) > cfg.contact_threshold) {
        mask.contact_detected = true;
        mask.center_index = best;
    } else {
        mask.flags.assign(grid.size(), false);
    }
    return mask;
}

StickRegion grow_stick_region(const MarkerGrid& grid, const ContactMask& mask, const LineFeatureAngles& angles,
                              const SegmentationConfig& cfg) {
    cfg.validate();
    if (mask.flags.size() != grid.size() || angles.angles.size() != grid.size() ||
        angles.valid.size() != grid.size()) {
        throw UsageError("mask/angle sizes do not match the grid");
    }

    StickRegion region;
    if (!mask.contact_detected) return region;

    const std::size_t flagged = mask.flagged_count();
    region.state = ContactState::MacroSlip;
    if (!mask.center_index || !mask.flags[*mask.center_index] || !angles.valid[*mask.center_index]) {
        return region;
    }

    const MarkerIndex center = *mask.center_index;
    const Vec2 origin = grid.reference_position(center);
    auto admissible = [&](MarkerIndex i) { return mask.flags[i] && angles.valid[i]; };

    using Entry = std::tuple<double, MarkerIndex>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> frontier;
    std::vector<bool> seen(grid.size(), false);
    auto enqueue_neighbors = [&](MarkerIndex p) {
        for (const auto& q : grid.neighbors(p).as_array()) {
            if (q && !seen[*q] && admissible(*q)) {
                seen[*q] = true;
                frontier.emplace(norm(grid.reference_position(*q) - origin), *q);
            }
        }
    };

    double sum = angles.angles[center];
    region.members.push_back(center);
    seen[center] = true;
    enqueue_neighbors(center);

    while (!frontier.empty()) {
        const MarkerIndex q = std::get<1>(frontier.top());
        frontier.pop();
        const double mean = sum / static_cast<double>(region.members.size());
        if (normalized_angle_difference(angles.angles[q], mean, cfg.epsilon_angle) < cfg.delta_phi_th) {
            region.members.push_back(q);
            sum += angles.angles[q];
            enqueue_neighbors(q);
        }
    }

    const auto n = region.members.size();
    region.mean_angle = sum / static_cast<double>(n);
    region.stick_ratio = static_cast<double>(n) / static_cast<double>(flagged);
    if (n < cfg.min_stick_markers) {
        region.state = ContactState::MacroSlip;
    } else if (n == flagged) {
        region.state = ContactState::Stick;
    } else {
        region.state = ContactState::IncipientSlip;
    }
    return region;
}

}  // namespace pivotsense
