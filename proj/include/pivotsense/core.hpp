#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace pivotsense {

// Error taxonomy shared by every module. The CLI maps UsageError/ConfigError
// to exit code 2 and everything else to exit code 1.
class UsageError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class InsufficientDataError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }
    friend bool operator==(Vec2 a, Vec2 b) = default;
};

inline double norm(Vec2 v) { return std::hypot(v.x, v.y); }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Vec2 tangential() const { return {x, y}; }
    friend bool operator==(const Vec3&, const Vec3&) = default;
};

inline double norm(const Vec3& v) { return std::sqrt(v.x * v.x + v.y * v.y + v.z * v.z); }

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double deg_to_rad(double deg) { return deg * (kPi / 180.0); }
inline constexpr double rad_to_deg(double rad) { return rad * (180.0 / kPi); }

/// Rotates `v` counter-clockwise by `angle_deg` degrees.
Vec2 rotate(Vec2 v, double angle_deg);

using MarkerIndex = std::size_t;

struct Neighbors {
    std::optional<MarkerIndex> left;
    std::optional<MarkerIndex> right;
    std::optional<MarkerIndex> up;
    std::optional<MarkerIndex> down;

    std::array<std::optional<MarkerIndex>, 4> as_array() const { return {left, right, up, down}; }
};

/// Reference geometry of the marker array. Marker (i, j) sits at
/// origin + (j * pitch, i * pitch); indices are row-major.
class MarkerGrid {
  public:
    MarkerGrid(std::size_t rows, std::size_t cols, double pitch, Vec2 origin = {});

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return rows_ * cols_; }
    double pitch() const { return pitch_; }
    Vec2 origin() const { return origin_; }

    MarkerIndex index(std::size_t row, std::size_t col) const;
    std::size_t row_of(MarkerIndex index) const { return index / cols_; }
    std::size_t col_of(MarkerIndex index) const { return index % cols_; }

    Vec2 reference_position(MarkerIndex index) const;
    const std::vector<Vec2>& reference_positions() const { return positions_; }

    /// Geometric center of the marker array.
    Vec2 center() const;
    /// Distance from the center to the nearest edge row/column.
    double half_extent() const;

    /// In-bounds 4-neighbors; "up" is the previous row.
    Neighbors neighbors(MarkerIndex index) const;

    friend bool operator==(const MarkerGrid& a, const MarkerGrid& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.pitch_ == b.pitch_ && a.origin_ == b.origin_;
    }

  private:
    std::size_t rows_;
    std::size_t cols_;
    double pitch_;
    Vec2 origin_;
    std::vector<Vec2> positions_;
};

inline Neighbors neighbor_indices(const MarkerGrid& grid, MarkerIndex index) { return grid.neighbors(index); }

/// Per-marker displacement (dx, dy tangential, dz normal) relative to the
/// reference configuration, in millimetres.
struct Frame {
    double timestamp = 0.0;
    std::vector<Vec3> displacements;

    /// Throws UsageError unless the frame has one finite entry per marker.
    void validate(const MarkerGrid& grid) const;
};

struct ContactMask {
    std::vector<bool> flags;
    bool contact_detected = false;
    std::optional<MarkerIndex> center_index;

    std::size_t flagged_count() const;
};

struct LineFeatureAngles {
    std::vector<double> angles;  // degrees, CCW positive
    std::vector<bool> valid;
};

enum class ContactState { NoContact, Stick, IncipientSlip, MacroSlip };

std::string to_string(ContactState state);
ContactState contact_state_from_string(const std::string& name);

struct StickRegion {
    std::vector<MarkerIndex> members;  // admission order; members.front() is the stick center
    double mean_angle = 0.0;           // degrees
    ContactState state = ContactState::NoContact;
    double stick_ratio = 0.0;
};

struct RotationEstimate {
    double theta = 0.0;  // degrees
    ContactState state = ContactState::NoContact;
    double stick_ratio = 0.0;
    std::optional<Vec2> cor;
};

/// Elastomer/object shear-modulus ratio and the accumulated L_xy, L_yx terms
/// (degrees). All zero for a rigid object.
struct SoftnessParams {
    double k = 0.0;
    double l_xy = 0.0;
    double l_yx = 0.0;

    void validate() const;
    bool is_rigid() const { return k == 0.0 && l_xy == 0.0 && l_yx == 0.0; }
};

}  // namespace pivotsense
