#pragma once

#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "pivotsense/core.hpp"

namespace pivotsense {

/// Piecewise-linear function of time given by (t, value) breakpoints. A
/// single breakpoint (or a constant) is defined for all t; otherwise the
/// domain is [first t, last t].
template <typename Value>
class PiecewiseLinear {
  public:
    using Breakpoint = std::pair<double, Value>;

    PiecewiseLinear(Value constant = Value{}) : points_{{0.0, constant}} {}  // NOLINT(google-explicit-constructor)

    explicit PiecewiseLinear(std::vector<Breakpoint> points) : points_(std::move(points)) {
        if (points_.empty()) {
            throw UsageError("trajectory needs at least one breakpoint");
        }
        for (std::size_t i = 0; i < points_.size(); ++i) {
            if (!std::isfinite(points_[i].first)) throw UsageError("trajectory breakpoint time is not finite");
            if (i > 0 && !(points_[i].first > points_[i - 1].first)) {
                throw UsageError("trajectory breakpoint times must be strictly increasing");
            }
        }
    }

    bool is_constant() const { return points_.size() == 1; }
    double t_min() const { return is_constant() ? -std::numeric_limits<double>::infinity() : points_.front().first; }
    double t_max() const { return is_constant() ? std::numeric_limits<double>::infinity() : points_.back().first; }
    bool in_domain(double t) const { return t >= t_min() && t <= t_max(); }
    const std::vector<Breakpoint>& breakpoints() const { return points_; }

    Value operator()(double t) const {
        if (!in_domain(t)) {
            throw UsageError("time " + std::to_string(t) + " outside trajectory domain");
        }
        if (is_constant() || t <= points_.front().first) return points_.front().second;
        for (std::size_t i = 1; i < points_.size(); ++i) {
            const auto& [t1, v1] = points_[i];
            if (t <= t1) {
                const auto& [t0, v0] = points_[i - 1];
                if (t == t1) return v1;
                const double w = (t - t0) / (t1 - t0);
                return v0 + w * (v1 - v0);
            }
        }
        return points_.back().second;
    }

  private:
    std::vector<Breakpoint> points_;
};

using ScalarTrajectory = PiecewiseLinear<double>;
using VectorTrajectory = PiecewiseLinear<Vec2>;

/// Generative parameters of a synthetic pivoting contact.
///
/// Inside the stick radius the elastomer co-rotates with the object; in the
/// slip annulus the local rotation decays as (r_s / rho)^gamma, and outside
/// the contact radius it tapers to zero over one more contact radius. All
/// elastomer rotations are attenuated by 1 / (1 + k).
struct SimScenario {
    MarkerGrid grid;
    double contact_radius = 6.0;           // a, mm
    ScalarTrajectory max_indent{0.5};      // w0, mm
    Vec2 cor{};                            // mm
    ScalarTrajectory stick_radius{4.0};    // r_s, mm
    ScalarTrajectory theta{0.0};           // object rotation, degrees
    VectorTrajectory translation{Vec2{}};  // mm
    double decay_exponent = 2.0;           // gamma
    SoftnessParams softness{};
    double noise_sigma = 0.005;  // mm
    std::uint64_t rng_seed = 0;

    /// Scenario centered on the grid with the defaults above.
    static SimScenario centered(const MarkerGrid& grid);

    void validate() const;
    bool in_domain(double t) const;
    double t_min() const;
    double t_max() const;
};

struct GroundTruth {
    double timestamp = 0.0;
    double theta = 0.0;  // degrees
    std::vector<bool> stick_mask;
    std::vector<Vec2> slip_field;  // object surface minus elastomer displacement, mm
    std::vector<bool> contact_mask_true;
};

struct SimSample {
    Frame frame;
    GroundTruth truth;
};

/// Local elastomer rotation magnitude (degrees, before the 1/(1+k)
/// attenuation) at distance `rho` from the COR.
double local_rotation_profile(double theta_deg, double rho, double stick_radius, double contact_radius, double gamma);

/// Weight applied to the rigid translation: 1 inside contact, tapering to 0
/// at twice the contact radius.
double contact_taper(double rho, double contact_radius);

/// Noiseless closed-form local rotation phi_loc(rho) / (1 + k) in degrees at
/// `position`. The elastomer surface turns by the negative of this angle.
double analytic_local_rotation(const SimScenario& scenario, double t, Vec2 position);

/// Samples the scenario at time t. `frame_index` selects the noise stream.
SimSample generate_frame(const SimScenario& scenario, double t, std::uint64_t frame_index = 0);

/// Frames at t0 + n / rate for every n with t0 + n / rate <= t1.
std::vector<SimSample> generate_trajectory(const SimScenario& scenario, double t0, double t1, double rate);

}  // namespace pivotsense
