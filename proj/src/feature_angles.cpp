#include "pivotsense/feature_angles.hpp"

#include <cmath>
#include <limits>

namespace pivotsense {

namespace {

void require_match(const MarkerGrid& grid, const Frame& frame) {
    if (frame.displacements.size() != grid.size()) {
        throw UsageError("frame has " + std::to_string(frame.displacements.size()) + " markers, grid has " +
                         std::to_string(grid.size()));
    }
}

// Signed angle from `from` to `to`, degrees in (-180, 180].
double signed_angle(Vec2 from, Vec2 to) {
    const double deg = rad_to_deg(std::atan2(cross(from, to), dot(from, to)));
    return deg <= -180.0 ? 180.0 : deg;
}

// Derivative along one lattice axis of samples f(0..n-1) at position k.
double axis_derivative(auto&& f, std::size_t k, std::size_t n, double h) {
    if (k > 0 && k + 1 < n) return (f(k + 1) - f(k - 1)) / (2.0 * h);
    if (n == 2) return (f(1) - f(0)) / h;
    if (k == 0) return (-3.0 * f(0) + 4.0 * f(1) - f(2)) / (2.0 * h);
    return (3.0 * f(n - 1) - 4.0 * f(n - 2) + f(n - 3)) / (2.0 * h);
}

}  // namespace

LineFeatureAngles line_feature_angles(const MarkerGrid& grid, const Frame& frame) {
    require_match(grid, frame);
    const double min_length = kDegenerateSegmentRatio * grid.pitch();

    LineFeatureAngles out;
    out.angles.assign(grid.size(), 0.0);
    out.valid.assign(grid.size(), false);

    for (MarkerIndex p = 0; p < grid.size(); ++p) {
        const Vec2 base = frame.displacements[p].tangential();
        double sum = 0.0;
        int used = 0;
        for (const auto& q : grid.neighbors(p).as_array()) {
            if (!q) continue;
            const Vec2 reference = grid.reference_position(*q) - grid.reference_position(p);
            const Vec2 current = reference + (frame.displacements[*q].tangential() - base);
            if (norm(current) < min_length) continue;
            sum += signed_angle(reference, current);
            ++used;
        }
        if (used >= 2) {
            out.angles[p] = sum / used;
            out.valid[p] = true;
        }
    }
    return out;
}

std::vector<double> half_curl(const MarkerGrid& grid, const Frame& frame_prev, const Frame& frame_next) {
    require_match(grid, frame_prev);
    require_match(grid, frame_next);
    const std::size_t rows = grid.rows();
    const std::size_t cols = grid.cols();
    const double h = grid.pitch();

    auto inc = [&](std::size_t i, std::size_t j) {
        const auto idx = i * cols + j;
        const Vec3& a = frame_prev.displacements[idx];
        const Vec3& b = frame_next.displacements[idx];
        return Vec2{b.x - a.x, b.y - a.y};
    };

    std::vector<double> out(grid.size());
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            const double dvy_dx = axis_derivative([&](std::size_t c) { return inc(i, c).y; }, j, cols, h);
            const double dvx_dy = axis_derivative([&](std::size_t r) { return inc(r, j).x; }, i, rows, h);
            out[i * cols + j] = rad_to_deg(0.5 * (dvy_dx - dvx_dy));
        }
    }
    return out;
}

double normalized_angle_difference(double phi_i, double phi_bar, double epsilon) {
    const double diff = std::abs(phi_i - phi_bar);
    if (std::abs(phi_i) <= epsilon || std::abs(phi_bar) <= epsilon) {
        return diff / epsilon;
    }
    if ((phi_i > 0.0) != (phi_bar > 0.0)) {
        return std::numeric_limits<double>::infinity();
    }
    return diff / std::sqrt(phi_i * phi_bar);
}

}  // namespace pivotsense
