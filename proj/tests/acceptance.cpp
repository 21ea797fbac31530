// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. All tolerances are fixed here.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "pivotsense/config.hpp"
#include "pivotsense/contact_sim.hpp"
#include "pivotsense/feature_angles.hpp"
#include "pivotsense/harness.hpp"

using namespace pivotsense;
using Clock = std::chrono::steady_clock;

namespace {

// Criterion 1
constexpr double kExactTol = 1e-6;  // degrees
constexpr double kExactBudget = 1.0;  // seconds
// Criterion 2
constexpr double kTranslationTol = 1e-9;  // degrees
constexpr double kMaxTranslation = 2.0;   // mm
// Criterion 3
constexpr double kF1Noiseless = 0.95;
constexpr double kF1Noisy = 0.85;
constexpr int kF1Trials = 50;
constexpr double kF1Budget = 30.0;  // seconds
// Criterion 4
constexpr int kAdvantageTrials = 100;
constexpr double kWinRate = 0.90;
// Criterion 5
constexpr double kCurlOrder = 1.9;
// Criterion 6
constexpr double kSoftK = 0.2;
constexpr double kSoftTol = 1e-6;
// Criterion 7
constexpr int kMacroTrials = 100;
// Criterion 8
constexpr double kFrameBudgetMs = 33.0;
constexpr int kLatencyFrames = 1000;
// Criterion 10: full-stick sweep MARE (degrees), pinned from the first
// brute-force oracle run (0.00413985).
constexpr double kGoldenMare = 0.00414;
constexpr double kGoldenTol = 0.20;  // relative

struct Result {
    bool pass;
    std::string detail;
};

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* format, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, format, args...);
    return buf;
}

Config preset(const std::string& name, const std::vector<std::string>& overrides = {}) {
    auto doc = nlohmann::json::parse(preset_text(name));
    apply_overrides(doc, overrides);
    return config_from_json(doc);
}

SimScenario base_scene(double theta, double rs) {
    SimScenario s = preset("full-stick").scenario;
    s.theta = theta;
    s.stick_radius = rs;
    s.noise_sigma = 0.0;
    return s;
}

Result exactness() {
    const auto start = Clock::now();
    double worst = 0.0;
    for (int theta = 2; theta <= 20; ++theta) {
        const SimScenario s = base_scene(theta, 8.0);
        const Frame frame = generate_frame(s, 0.0).frame;
        Pipeline pipe(s.grid);
        FrameOutput out;
        for (std::size_t i = 0; i < kFilterWindow + 1; ++i) {
            Frame f = frame;
            f.timestamp = static_cast<double>(i);
            out = pipe.process_frame(f);
        }
        worst = std::max(worst, std::abs(out.filtered.theta - theta));
    }
    const double elapsed = seconds_since(start);
    return {worst < kExactTol && elapsed < kExactBudget,
            fmt("max |err| %.3g deg (< %g), %.3f s (< %g s)", worst, kExactTol, elapsed, kExactBudget)};
}

Result translation_invariance() {
    std::vector<SimScenario> fields;
    for (double theta : {2.0, 11.0, 20.0}) {
        for (double rs : {2.0, 4.0, 6.0, 8.0}) fields.push_back(base_scene(theta, rs));
    }
    const std::vector<Vec2> shifts{{kMaxTranslation, 0.0}, {0.0, -kMaxTranslation}, {1.2, 1.6}, {-0.3, 0.05}};
    double worst = 0.0;
    for (const auto& s : fields) {
        const Pipeline pipe(s.grid);
        const Frame frame = generate_frame(s, 0.0).frame;
        const double base = pipe.estimate_static(frame).raw.theta;
        for (Vec2 shift : shifts) {
            Frame moved = frame;
            for (auto& d : moved.displacements) {
                d.x += shift.x;
                d.y += shift.y;
            }
            worst = std::max(worst, std::abs(pipe.estimate_static(moved).raw.theta - base));
        }
    }
    return {worst < kTranslationTol, fmt("max change %.3g deg (< %g) over %zu fields x %zu shifts", worst,
                                         kTranslationTol, fields.size(), shifts.size())};
}

Result stick_recovery() {
    const auto start = Clock::now();
    double min_clean = 1.0;
    double min_noisy = 1.0;
    double worst_ratio = 0.0;
    double worst_theta = 0.0;
    const SegmentationConfig cfg;
    for (double ratio : {0.4, 0.6, 0.8}) {
        for (double theta : {5.0, 10.0, 15.0}) {
            SimScenario s = base_scene(theta, ratio * 8.0);
            for (double sigma : {0.0, 0.005}) {
                s.noise_sigma = sigma;
                s.rng_seed = 100;
                double sum = 0.0;
                for (int trial = 0; trial < kF1Trials; ++trial) {
                    const auto sample = generate_frame(s, 0.0, static_cast<std::uint64_t>(trial));
                    const auto mask = detect_contact(s.grid, sample.frame, cfg);
                    const auto region =
                        grow_stick_region(s.grid, mask, line_feature_angles(s.grid, sample.frame), cfg);
                    sum += oracle::f1_counts(region.members, sample.truth.stick_mask).f1();
                }
                double& target = sigma == 0.0 ? min_clean : min_noisy;
                if (sigma == 0.0 && sum / kF1Trials < min_clean) {
                    worst_ratio = ratio;
                    worst_theta = theta;
                }
                target = std::min(target, sum / kF1Trials);
            }
        }
    }
    const double elapsed = seconds_since(start);
    return {min_clean >= kF1Noiseless && min_noisy >= kF1Noisy && elapsed < kF1Budget,
            fmt("min mean F1 noiseless %.3f (>= %g, at r_s/a %.1f, theta %g), noisy %.3f (>= %g), %.1f s", min_clean,
                kF1Noiseless, worst_ratio, worst_theta, min_noisy, kF1Noisy, elapsed)};
}

Result incipient_advantage() {
    SimScenario s = base_scene(10.0, 4.0);
    s.noise_sigma = 0.005;
    s.rng_seed = 200;
    const Pipeline pipe(s.grid);
    int wins = 0;
    for (int trial = 0; trial < kAdvantageTrials; ++trial) {
        const double theta = 10.0 + 10.0 * trial / (kAdvantageTrials - 1);
        s.theta = theta;
        const Frame f = generate_frame(s, 0.0, static_cast<std::uint64_t>(trial)).frame;
        const auto out = pipe.estimate_static(f);
        const auto base = baseline_least_squares(s.grid, f, out.mask);
        wins += std::abs(out.raw.theta - theta) < std::abs(base.theta - theta);
    }
    std::vector<double> base_error;
    for (double theta : {10.0, 14.0, 18.0}) {
        s.theta = theta;
        double sum = 0.0;
        for (int trial = 0; trial < 25; ++trial) {
            const Frame f = generate_frame(s, 0.0, 1000 + static_cast<std::uint64_t>(trial)).frame;
            sum += std::abs(baseline_least_squares(s.grid, f, detect_contact(s.grid, f, {})).theta - theta);
        }
        base_error.push_back(sum / 25);
    }
    const double rate = static_cast<double>(wins) / kAdvantageTrials;
    const bool monotone = base_error[0] < base_error[1] && base_error[1] < base_error[2];
    return {rate >= kWinRate && monotone,
            fmt("win rate %.2f (>= %.2f); baseline mean error %.2f < %.2f < %.2f deg", rate, kWinRate, base_error[0],
                base_error[1], base_error[2])};
}

Result curl_convergence() {
    // Increment between Theta = 10 and 10.5 deg; probes are the pitch-1
    // markers of the slip annulus at least one pitch from its kinks.
    const double rs = 3.0;
    const double a = 8.0;
    std::vector<double> errors;
    for (double h : {1.0, 0.5, 0.25, 0.125}) {
        const auto n = static_cast<std::size_t>(std::lround(19.0 / h)) + 1;
        SimScenario s = SimScenario::centered(MarkerGrid(n, n, h));
        s.contact_radius = a;
        s.stick_radius = rs;
        s.noise_sigma = 0.0;
        s.theta = 10.0;
        const Frame prev = generate_frame(s, 0.0).frame;
        s.theta = 10.5;
        const Frame next = generate_frame(s, 0.0).frame;
        const auto hc = half_curl(s.grid, prev, next);
        double worst = 0.0;
        for (std::size_t i = 1; i < 19; ++i) {
            for (std::size_t j = 1; j < 19; ++j) {
                const Vec2 p{static_cast<double>(j), static_cast<double>(i)};
                const double rho = std::hypot(p.x - s.cor.x, p.y - s.cor.y);
                if (rho < rs + 1.0 || rho > a - 1.0) continue;
                const auto idx = s.grid.index(static_cast<std::size_t>(std::lround(p.y / h)),
                                              static_cast<std::size_t>(std::lround(p.x / h)));
                const double exact = oracle::half_curl_exact(s, 10.5, rs, p) - oracle::half_curl_exact(s, 10.0, rs, p);
                worst = std::max(worst, std::abs(hc[idx] - exact));
            }
        }
        errors.push_back(worst);
    }
    double min_order = 1e9;
    std::string orders;
    for (std::size_t k = 1; k < errors.size(); ++k) {
        const double order = std::log2(errors[k - 1] / errors[k]);
        min_order = std::min(min_order, order);
        orders += fmt("%s%.2f", k > 1 ? ", " : "", order);
    }
    return {min_order >= kCurlOrder, fmt("observed orders %s (>= %g); finest error %.2g deg", orders.c_str(),
                                         kCurlOrder, errors.back())};
}

Result soft_correction() {
    double worst_rel = 0.0;
    double worst_soft = 0.0;
    const double expected = kSoftK / (1.0 + kSoftK);
    for (int theta = 2; theta <= 20; theta += 2) {
        SimScenario s = base_scene(theta, 8.0);
        s.softness.k = kSoftK;
        const Frame f = generate_frame(s, 0.0).frame;
        const double rigid = Pipeline(s.grid).estimate_static(f).raw.theta;
        const double soft = Pipeline(s.grid, {}, {kSoftK, 0.0, 0.0}).estimate_static(f).raw.theta;
        worst_rel = std::max(worst_rel, std::abs((theta - rigid) / theta - expected));
        worst_soft = std::max(worst_soft, std::abs(soft - theta));
    }
    return {worst_rel < kSoftTol && worst_soft < kSoftTol,
            fmt("rigid-mode relative error off k/(1+k) by %.3g; soft mode |err| %.3g deg (< %g)", worst_rel, worst_soft,
                kSoftTol)};
}

Result macro_slip() {
    int flipped = 0;
    int false_positive = 0;
    for (int trial = 0; trial < kMacroTrials; ++trial) {
        const double theta = 2.0 + 18.0 * trial / (kMacroTrials - 1);
        // One marker sits at the COR; r_s is half a pitch.
        SimScenario slip = base_scene(theta, 0.5);
        slip.cor = slip.grid.reference_position(slip.grid.index(10, 10));
        flipped += Pipeline(slip.grid).estimate_static(generate_frame(slip, 0.0).frame).raw.state ==
                   ContactState::MacroSlip;

        SimScenario stick = base_scene(theta, 8.0);
        stick.cor = stick.grid.center() + Vec2{0.5 * std::sin(trial), 0.5 * std::cos(trial)};
        false_positive += Pipeline(stick.grid).estimate_static(generate_frame(stick, 0.0).frame).raw.state ==
                          ContactState::MacroSlip;
    }
    return {flipped == kMacroTrials && false_positive == 0,
            fmt("macro slip flagged %d/%d; false positives on full stick %d/%d", flipped, kMacroTrials, false_positive,
                kMacroTrials)};
}

Result realtime() {
    const Config cfg = preset("three-lift");
    const auto frames = generate_trajectory(cfg.scenario, 0.0, 9.0, 1000.0 / 9.0);
    Pipeline pipe(cfg.scenario.grid, cfg.segmentation, cfg.softness);
    std::vector<double> ms;
    for (int i = 0; i < kLatencyFrames; ++i) {
        const auto start = Clock::now();
        pipe.process_frame(frames[static_cast<std::size_t>(i)].frame);
        ms.push_back(1e3 * seconds_since(start));
    }
    std::sort(ms.begin(), ms.end());
    const double p99 = ms[static_cast<std::size_t>(0.99 * (ms.size() - 1))];
    return {p99 < kFrameBudgetMs, fmt("p99 %.3f ms, max %.3f ms over %d frames (< %g ms)", p99, ms.back(),
                                      kLatencyFrames, kFrameBudgetMs)};
}

std::string stream_round_trip(const Config& cfg) {
    std::stringstream frames;
    simulate_stream(cfg, frames);
    std::ostringstream csv, warnings;
    estimate_from_stream(frames, csv, warnings, cfg.segmentation, cfg.softness);
    return csv.str();
}

std::string dynamic_columns(const Config& cfg) {
    std::ostringstream out;
    out << "t,theta_raw,theta_filtered,state,stick_ratio\n";
    for (const auto& r : run_dynamic(cfg).rows) {
        out << format_time(r.t) << ',' << format_angle(r.theta_raw) << ',' << format_angle(r.theta_filtered) << ','
            << to_string(r.state) << ',' << format_angle(r.stick_ratio) << '\n';
    }
    return out.str();
}

Result determinism() {
    const Config cfg = preset("three-lift");
    const std::string streamed = stream_round_trip(cfg);
    const bool same = streamed == dynamic_columns(cfg);
    const bool repeat = streamed == stream_round_trip(cfg);
    std::ostringstream d1, d2;
    write_dynamic_csv(d1, run_dynamic(cfg));
    write_dynamic_csv(d2, run_dynamic(cfg));
    const bool dyn_repeat = d1.str() == d2.str();
    return {same && repeat && dyn_repeat,
            fmt("stream vs in-process %s; repeated stream %s; repeated dynamic %s (%zu bytes)",
                same ? "identical" : "DIFFER", repeat ? "identical" : "DIFFER", dyn_repeat ? "identical" : "DIFFER",
                streamed.size())};
}

// Brute-force sweep MARE for a full-stick scenario: every marker above half
// the peak indentation is averaged, with segment angles taken straight from
// atan2 of the deformed neighbor segments.
double oracle_sweep_mare(const Config& cfg) {
    const MarkerGrid& g = cfg.scenario.grid;
    const auto& h = cfg.harness;
    double sum = 0.0;
    std::size_t n = 0;
    for (int angle = h.angle_min; angle <= h.angle_max; ++angle) {
        SimScenario s = cfg.scenario;
        s.theta = static_cast<double>(angle);
        for (std::size_t trial = 0; trial < h.trials; ++trial) {
            const auto frame_index = static_cast<std::uint64_t>(angle - h.angle_min) * h.trials + trial;
            const auto& d = generate_frame(s, 0.0, frame_index).frame.displacements;
            double peak = 0.0;
            for (const auto& v : d) peak = std::max(peak, v.z);
            double total = 0.0;
            std::size_t count = 0;
            for (std::size_t i = 0; i < g.rows(); ++i) {
                for (std::size_t j = 0; j < g.cols(); ++j) {
                    const auto p = i * g.cols() + j;
                    if (d[p].z < 0.5 * peak) continue;
                    const long di[4] = {0, 0, -1, 1};
                    const long dj[4] = {-1, 1, 0, 0};
                    double local = 0.0;
                    int used = 0;
                    for (int k = 0; k < 4; ++k) {
                        const long ni = static_cast<long>(i) + di[k];
                        const long nj = static_cast<long>(j) + dj[k];
                        if (ni < 0 || nj < 0 || ni >= static_cast<long>(g.rows()) || nj >= static_cast<long>(g.cols()))
                            continue;
                        const auto q = static_cast<std::size_t>(ni) * g.cols() + static_cast<std::size_t>(nj);
                        const double rx = static_cast<double>(dj[k]) * g.pitch();
                        const double ry = static_cast<double>(di[k]) * g.pitch();
                        const double cx = rx + d[q].x - d[p].x;
                        const double cy = ry + d[q].y - d[p].y;
                        local += oracle::deg(std::atan2(cy, cx) - std::atan2(ry, rx));
                        ++used;
                    }
                    total += local / used;
                    ++count;
                }
            }
            sum += std::abs(-total / static_cast<double>(count) - angle);
            ++n;
        }
    }
    return sum / static_cast<double>(n);
}

Result sweep_regression() {
    const Config cfg = preset("full-stick");
    const SweepReport report = run_static_sweep(cfg);
    const double mare = report.proposed.mean_abs_error;
    const double oracle_mare = oracle_sweep_mare(cfg);
    const bool agrees = std::abs(mare - oracle_mare) < 1e-9;
    const double rel = std::abs(mare - kGoldenMare) / kGoldenMare;
    return {agrees && rel <= kGoldenTol,
            fmt("MARE %.4g +- %.3g deg, oracle %.4g; golden %.4g (within %.0f%%: off %.1f%%)", mare,
                report.proposed.std_error, oracle_mare, kGoldenMare, 100 * kGoldenTol, 100 * rel)};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Result()>>> criteria{
        {"noiseless exactness", exactness},
        {"translation suppression", translation_invariance},
        {"stick-region recovery", stick_recovery},
        {"incipient-slip advantage", incipient_advantage},
        {"curl identity convergence", curl_convergence},
        {"soft-object correction", soft_correction},
        {"macro-slip detection", macro_slip},
        {"real-time budget", realtime},
        {"determinism and round-trip", determinism},
        {"static sweep regression", sweep_regression},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Result r;
        try {
            r = criteria[i].second();
        } catch (const std::exception& e) {
            r = {false, std::string("exception: ") + e.what()};
        }
        failures += !r.pass;
        std::printf("criterion %2zu %-28s %s  %s\n", i + 1, criteria[i].first, r.pass ? "PASS" : "FAIL",
                    r.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%zu/%zu criteria passed\n", criteria.size() - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
