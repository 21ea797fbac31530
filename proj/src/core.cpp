#include "pivotsense/core.hpp"

#include <algorithm>

namespace pivotsense {

Vec2 rotate(Vec2 v, double angle_deg) {
    const double a = deg_to_rad(angle_deg);
    const double c = std::cos(a);
    const double s = std::sin(a);
    return {c * v.x - s * v.y, s * v.x + c * v.y};
}

MarkerGrid::MarkerGrid(std::size_t rows, std::size_t cols, double pitch, Vec2 origin)
    : rows_(rows), cols_(cols), pitch_(pitch), origin_(origin) {
    if (rows < 2 || cols < 2) {
        throw UsageError("marker grid needs at least 2 rows and 2 columns");
    }
    if (!(pitch > 0.0) || !std::isfinite(pitch)) {
        throw UsageError("marker pitch must be positive");
    }
    if (!std::isfinite(origin.x) || !std::isfinite(origin.y)) {
        throw UsageError("marker grid origin must be finite");
    }
    positions_.reserve(rows * cols);
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            // constructed per marker, never accumulated
            positions_.push_back({origin.x + static_cast<double>(j) * pitch, origin.y + static_cast<double>(i) * pitch});
        }
    }
}

MarkerIndex MarkerGrid::index(std::size_t row, std::size_t col) const {
    if (row >= rows_ || col >= cols_) {
        throw UsageError("marker (" + std::to_string(row) + ", " + std::to_string(col) + ") outside grid");
    }
    return row * cols_ + col;
}

Vec2 MarkerGrid::reference_position(MarkerIndex index) const {
    if (index >= size()) {
        throw UsageError("marker index " + std::to_string(index) + " out of range");
    }
    return positions_[index];
}

Vec2 MarkerGrid::center() const {
    return {origin_.x + 0.5 * static_cast<double>(cols_ - 1) * pitch_,
            origin_.y + 0.5 * static_cast<double>(rows_ - 1) * pitch_};
}

double MarkerGrid::half_extent() const {
    return 0.5 * static_cast<double>(std::min(rows_, cols_) - 1) * pitch_;
}

Neighbors MarkerGrid::neighbors(MarkerIndex index) const {
    if (index >= size()) {
        throw UsageError("marker index " + std::to_string(index) + " out of range");
    }
    const std::size_t i = row_of(index);
    const std::size_t j = col_of(index);
    Neighbors n;
    if (j > 0) n.left = index - 1;
    if (j + 1 < cols_) n.right = index + 1;
    if (i > 0) n.up = index - cols_;
    if (i + 1 < rows_) n.down = index + cols_;
    return n;
}

void Frame::validate(const MarkerGrid& grid) const {
    if (displacements.size() != grid.size()) {
        throw UsageError("frame has " + std::to_string(displacements.size()) + " markers, grid has " +
                         std::to_string(grid.size()));
    }
    if (!std::isfinite(timestamp)) {
        throw UsageError("frame timestamp is not finite");
    }
    for (const auto& d : displacements) {
        if (!std::isfinite(d.x) || !std::isfinite(d.y) || !std::isfinite(d.z)) {
            throw UsageError("frame contains a non-finite displacement");
        }
    }
}

std::size_t ContactMask::flagged_count() const {
    return static_cast<std::size_t>(std::count(flags.begin(), flags.end(), true));
}

std::string to_string(ContactState state) {
    switch (state) {
        case ContactState::NoContact: return "NoContact";
        case ContactState::Stick: return "Stick";
        case ContactState::IncipientSlip: return "IncipientSlip";
        case ContactState::MacroSlip: return "MacroSlip";
    }
    return "Unknown";
}

ContactState contact_state_from_string(const std::string& name) {
    for (auto s : {ContactState::NoContact, ContactState::Stick, ContactState::IncipientSlip, ContactState::MacroSlip}) {
        if (to_string(s) == name) return s;
    }
    throw UsageError("unknown contact state '" + name + "'");
}

void SoftnessParams::validate() const {
    if (!(k >= 0.0) || !std::isfinite(k)) {
        throw UsageError("softness ratio k must be finite and non-negative");
    }
    if (!std::isfinite(l_xy) || !std::isfinite(l_yx)) {
        throw UsageError("softness constants must be finite");
    }
}

}  // namespace pivotsense
