#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pivotsense/config.hpp"
#include "pivotsense/estimation.hpp"

namespace pivotsense {

// ---- static protocol -------------------------------------------------------

struct ErrorStats {
    double mean_abs_error = 0.0;  // degrees
    double std_error = 0.0;       // sample standard deviation of |error|
    std::size_t trials = 0;
};

struct SweepRow {
    int theta_true = 0;  // degrees
    std::size_t trials = 0;
    ErrorStats proposed;
    ErrorStats baseline;              // over trials where the baseline produced an estimate
    std::size_t baseline_insufficient = 0;
    std::size_t proposed_wins = 0;    // proposed |error| strictly below baseline
};

struct SweepReport {
    std::vector<SweepRow> rows;
    ErrorStats proposed;  // overall MARE +- std
    ErrorStats baseline;
    std::size_t baseline_insufficient = 0;
    std::size_t proposed_wins = 0;

    /// Fraction of comparable trials (baseline available) won by the proposed estimator.
    std::optional<double> win_rate() const;
    static std::optional<double> win_rate(const SweepRow& row);
};

/// One noisy static frame per trial at every integer angle in
/// [angle_min, angle_max]; the temporal filter is bypassed.
SweepReport run_static_sweep(const Config& config);

/// Same trials as the sweep; reported side by side with win rates.
SweepReport compare_estimators(const Config& config);

void write_sweep_csv(std::ostream& out, const SweepReport& report);
void write_comparison_csv(std::ostream& out, const SweepReport& report);
std::string sweep_summary(const SweepReport& report);
std::string comparison_summary(const SweepReport& report);

// ---- dynamic protocol ------------------------------------------------------

struct DynamicRow {
    double t = 0.0;
    double theta_true = 0.0;
    double theta_raw = 0.0;
    double theta_filtered = 0.0;
    ContactState state = ContactState::NoContact;
    double stick_ratio = 0.0;
};

struct DynamicReport {
    std::vector<DynamicRow> rows;
    ErrorStats in_range;  // filtered error, excluding MacroSlip and out-of-range truth
};

/// Resolved [t0, t1] for trajectory runs: harness overrides, else the
/// scenario's own domain, else [0, 1].
std::pair<double, double> trajectory_range(const Config& config);

DynamicReport run_dynamic(const Config& config);
void write_dynamic_csv(std::ostream& out, const DynamicReport& report);
std::string dynamic_summary(const DynamicReport& report);

// ---- streams ---------------------------------------------------------------

/// Writes the scenario's frames as NDJSON (header first). Ground truth goes
/// to `truth` when given. Returns the number of frames.
std::size_t simulate_stream(const Config& config, std::ostream& frames, std::ostream* truth = nullptr);

struct StreamStats {
    std::size_t frames = 0;
    std::size_t skipped = 0;
};

/// Replays an NDJSON frame stream through the streaming pipeline, writing
/// one CSV row per accepted frame. Malformed or out-of-order lines are
/// reported to `warnings` and skipped. A missing or bad header throws
/// std::runtime_error.
StreamStats estimate_from_stream(std::istream& in, std::ostream& out, std::ostream& warnings,
                                 const SegmentationConfig& cfg, const SoftnessParams& softness);

/// CSV cell formatting: angles and ratios to 6 significant digits, times to
/// 10; negative zero prints as 0.
std::string format_angle(double value);
std::string format_time(double value);

}  // namespace pivotsense
