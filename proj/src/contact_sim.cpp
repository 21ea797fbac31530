#include "pivotsense/contact_sim.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace pivotsense {

namespace {

template <typename Value>
void check_range(const PiecewiseLinear<Value>& traj, const char* name, auto&& predicate) {
    for (const auto& [t, v] : traj.breakpoints()) {
        if (!predicate(v)) {
            throw UsageError(std::string("scenario ") + name + " out of range at t = " + std::to_string(t));
        }
    }
}

std::mt19937_64 noise_stream(std::uint64_t seed, std::uint64_t frame_index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(frame_index), static_cast<std::uint32_t>(frame_index >> 32)};
    return std::mt19937_64(seq);
}

}  // namespace

SimScenario SimScenario::centered(const MarkerGrid& grid) {
    SimScenario s{.grid = grid};
    s.cor = grid.center();
    return s;
}

void SimScenario::validate() const {
    const double a = contact_radius;
    if (!(a > 0.0) || !std::isfinite(a)) throw UsageError("scenario contact_radius must be positive");
    if (a > grid.half_extent() + 1e-12) {
        throw UsageError("scenario contact_radius exceeds the grid half-extent");
    }
    check_range(stick_radius, "stick_radius", [a](double r) { return r > 0.0 && r <= a; });
    check_range(max_indent, "max_indent", [](double w) { return w >= 0.0 && std::isfinite(w); });
    if (std::none_of(max_indent.breakpoints().begin(), max_indent.breakpoints().end(),
                     [](const auto& bp) { return bp.second > 0.0; })) {
        throw UsageError("scenario max_indent must be positive somewhere");
    }
    check_range(theta, "theta", [](double v) { return std::isfinite(v); });
    check_range(translation, "translation", [](Vec2 v) { return std::isfinite(v.x) && std::isfinite(v.y); });
    if (!(decay_exponent > 0.0) || !std::isfinite(decay_exponent)) {
        throw UsageError("scenario decay_exponent must be positive");
    }
    if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) {
        throw UsageError("scenario noise_sigma must be non-negative");
    }
    if (!std::isfinite(cor.x) || !std::isfinite(cor.y)) throw UsageError("scenario cor must be finite");
    softness.validate();
}

double SimScenario::t_min() const {
    return std::max({max_indent.t_min(), stick_radius.t_min(), theta.t_min(), translation.t_min()});
}

double SimScenario::t_max() const {
    return std::min({max_indent.t_max(), stick_radius.t_max(), theta.t_max(), translation.t_max()});
}

bool SimScenario::in_domain(double t) const { return std::isfinite(t) && t >= t_min() && t <= t_max(); }

double local_rotation_profile(double theta_deg, double rho, double stick_radius, double contact_radius, double gamma) {
    if (rho <= stick_radius) return theta_deg;
    const double a = contact_radius;
    if (rho > 2.0 * a) return 0.0;
    const double decayed = theta_deg * std::pow(stick_radius / rho, gamma);
    return rho <= a ? decayed : decayed * contact_taper(rho, a);
}

double contact_taper(double rho, double contact_radius) {
    const double a = contact_radius;
    if (rho <= a) return 1.0;
    if (rho > 2.0 * a) return 0.0;
    const double u = (rho - a) / a;
    return std::sqrt(std::max(0.0, 1.0 - u * u));
}

double analytic_local_rotation(const SimScenario& scenario, double t, Vec2 position) {
    const double rho = norm(position - scenario.cor);
    const double phi = local_rotation_profile(scenario.theta(t), rho, scenario.stick_radius(t),
                                              scenario.contact_radius, scenario.decay_exponent);
    return phi / (1.0 + scenario.softness.k);
}

SimSample generate_frame(const SimScenario& scenario, double t, std::uint64_t frame_index) {
    scenario.validate();
    if (!scenario.in_domain(t)) {
        throw UsageError("time " + std::to_string(t) + " outside scenario domain");
    }
    const MarkerGrid& grid = scenario.grid;
    const double theta = scenario.theta(t);
    const double rs = scenario.stick_radius(t);
    const double w0 = scenario.max_indent(t);
    const Vec2 shift = scenario.translation(t);
    const double a = scenario.contact_radius;
    const double soft = 1.0 + scenario.softness.k;

    SimSample out;
    out.frame.timestamp = t;
    out.frame.displacements.resize(grid.size());
    out.truth.timestamp = t;
    out.truth.theta = theta;
    out.truth.stick_mask.resize(grid.size());
    out.truth.contact_mask_true.resize(grid.size());
    out.truth.slip_field.resize(grid.size());

    for (MarkerIndex idx = 0; idx < grid.size(); ++idx) {
        const Vec2 d = grid.reference_position(idx) - scenario.cor;
        const double rho = norm(d);
        const double phi = local_rotation_profile(theta, rho, rs, a, scenario.decay_exponent);
        const double taper = contact_taper(rho, a);

        // The elastomer turns opposite to the reported object angle.
        const double elastomer_angle = -phi / soft;
        const Vec2 elastic = rotate(d, elastomer_angle) - d;
        const Vec2 tangential = elastic + taper * shift;
        const double rr = rho / a;
        const double dz = w0 * std::sqrt(std::max(0.0, 1.0 - rr * rr));
        out.frame.displacements[idx] = {tangential.x, tangential.y, dz};

        // Object surface: rigid (theta, shift) plus its own deformation, which
        // turns by k times the elastomer rotation. phi == theta in the stick
        // zone, so the two rotations coincide bitwise there.
        const Vec2 object_surface = rotate(d, elastomer_angle + (phi - theta)) - d;
        out.truth.slip_field[idx] = (object_surface - elastic) + (1.0 - taper) * shift;
        out.truth.contact_mask_true[idx] = rho <= a;
        out.truth.stick_mask[idx] = rho <= rs && rho <= a;
    }

    if (scenario.noise_sigma > 0.0) {
        auto rng = noise_stream(scenario.rng_seed, frame_index);
        std::normal_distribution<double> noise(0.0, scenario.noise_sigma);
        for (auto& v : out.frame.displacements) {
            v.x += noise(rng);
            v.y += noise(rng);
            v.z += noise(rng);
        }
    }
    return out;
}

std::vector<SimSample> generate_trajectory(const SimScenario& scenario, double t0, double t1, double rate) {
    if (!std::isfinite(t0) || !std::isfinite(t1) || !(t0 < t1)) {
        throw UsageError("trajectory range must satisfy t0 < t1");
    }
    if (!(rate > 0.0) || !std::isfinite(rate)) throw UsageError("trajectory rate must be positive");
    // Tolerate t1 landing a rounding error short of a sample.
    const auto count = static_cast<std::uint64_t>(std::floor((t1 - t0) * rate + 1e-9)) + 1;
    std::vector<SimSample> frames;
    frames.reserve(count);
    for (std::uint64_t n = 0; n < count; ++n) {
        const double t = t0 + static_cast<double>(n) / rate;
        frames.push_back(generate_frame(scenario, std::min(t, t1), n));
    }
    return frames;
}

}  // namespace pivotsense
