#include "pivotsense/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "pivotsense/ndjson.hpp"

namespace pivotsense {

namespace {

class StatsAccumulator {
  public:
    void add(double x) {
        ++n_;
        const double delta = x - mean_;
        mean_ += delta / static_cast<double>(n_);
        m2_ += delta * (x - mean_);
    }

    ErrorStats stats() const {
        ErrorStats s;
        s.trials = n_;
        s.mean_abs_error = mean_;
        s.std_error = n_ > 1 ? std::sqrt(m2_ / static_cast<double>(n_ - 1)) : 0.0;
        return s;
    }

  private:
    std::size_t n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

double static_time(const SimScenario& s) { return std::clamp(0.0, s.t_min(), s.t_max()); }

std::string format_ratio(std::optional<double> v) { return v ? format_angle(*v) : std::string(); }

void write_estimate_cells(std::ostream& out, const RotationEstimate& raw, const RotationEstimate& filtered) {
    out << format_angle(raw.theta) << ',' << format_angle(filtered.theta) << ',' << to_string(filtered.state) << ','
        << format_angle(filtered.stick_ratio);
}

}  // namespace

std::string format_angle(double value) {
    if (value == 0.0) return "0";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", value);
    return buf;
}

std::string format_time(double value) {
    if (value == 0.0) return "0";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", value);
    return buf;
}

std::optional<double> SweepReport::win_rate() const {
    const std::size_t comparable = baseline.trials;
    if (comparable == 0) return std::nullopt;
    return static_cast<double>(proposed_wins) / static_cast<double>(comparable);
}

std::optional<double> SweepReport::win_rate(const SweepRow& row) {
    if (row.baseline.trials == 0) return std::nullopt;
    return static_cast<double>(row.proposed_wins) / static_cast<double>(row.baseline.trials);
}

SweepReport run_static_sweep(const Config& config) {
    const HarnessOptions& h = config.harness;
    const MarkerGrid& grid = config.scenario.grid;
    const Pipeline pipeline(grid, config.segmentation, config.softness);

    SweepReport report;
    StatsAccumulator all_proposed;
    StatsAccumulator all_baseline;
    for (int angle = h.angle_min; angle <= h.angle_max; ++angle) {
        SimScenario scenario = config.scenario;
        scenario.theta = ScalarTrajectory(static_cast<double>(angle));
        const double t = static_time(scenario);

        SweepRow row;
        row.theta_true = angle;
        row.trials = h.trials;
        StatsAccumulator proposed;
        StatsAccumulator baseline;
        for (std::size_t trial = 0; trial < h.trials; ++trial) {
            const auto stream = static_cast<std::uint64_t>(angle - h.angle_min) * h.trials + trial;
            const SimSample sample = generate_frame(scenario, t, stream);
            const FrameOutput out = pipeline.estimate_static(sample.frame);
            const double err = std::abs(out.raw.theta - angle);
            proposed.add(err);
            all_proposed.add(err);
            try {
                const RotationEstimate fit = baseline_least_squares(grid, sample.frame, out.mask);
                const double berr = std::abs(fit.theta - angle);
                baseline.add(berr);
                all_baseline.add(berr);
                if (err < berr) ++row.proposed_wins;
            } catch (const InsufficientDataError&) {
                ++row.baseline_insufficient;
            }
        }
        row.proposed = proposed.stats();
        row.baseline = baseline.stats();
        report.baseline_insufficient += row.baseline_insufficient;
        report.proposed_wins += row.proposed_wins;
        report.rows.push_back(row);
    }
    report.proposed = all_proposed.stats();
    report.baseline = all_baseline.stats();
    return report;
}

SweepReport compare_estimators(const Config& config) { return run_static_sweep(config); }

void write_sweep_csv(std::ostream& out, const SweepReport& report) {
    out << "theta_true,trials,proposed_mean_abs_error,proposed_std_error,baseline_mean_abs_error,baseline_std_error\n";
    for (const auto& r : report.rows) {
        out << r.theta_true << ',' << r.trials << ',' << format_angle(r.proposed.mean_abs_error) << ','
            << format_angle(r.proposed.std_error) << ',';
        if (r.baseline.trials > 0) {
            out << format_angle(r.baseline.mean_abs_error) << ',' << format_angle(r.baseline.std_error);
        } else {
            out << ',';
        }
        out << '\n';
    }
}

void write_comparison_csv(std::ostream& out, const SweepReport& report) {
    out << "theta_true,trials,proposed_mare,baseline_mare,win_rate,baseline_insufficient\n";
    for (const auto& r : report.rows) {
        out << r.theta_true << ',' << r.trials << ',' << format_angle(r.proposed.mean_abs_error) << ','
            << (r.baseline.trials > 0 ? format_angle(r.baseline.mean_abs_error) : std::string()) << ','
            << format_ratio(SweepReport::win_rate(r)) << ',' << r.baseline_insufficient << '\n';
    }
}

std::string sweep_summary(const SweepReport& report) {
    std::ostringstream s;
    s << "proposed MARE " << format_angle(report.proposed.mean_abs_error) << " +- "
      << format_angle(report.proposed.std_error) << " deg over " << report.proposed.trials << " trials\n";
    s << "baseline MARE " << format_angle(report.baseline.mean_abs_error) << " +- "
      << format_angle(report.baseline.std_error) << " deg over " << report.baseline.trials << " trials";
    if (report.baseline_insufficient > 0) s << " (" << report.baseline_insufficient << " insufficient-data)";
    s << '\n';
    return s.str();
}

std::string comparison_summary(const SweepReport& report) {
    std::ostringstream s;
    s << sweep_summary(report);
    const auto rate = report.win_rate();
    s << "proposed win rate " << (rate ? format_angle(*rate) : std::string("n/a")) << " (" << report.proposed_wins
      << " of " << report.baseline.trials << " comparable trials)\n";
    return s.str();
}

std::pair<double, double> trajectory_range(const Config& config) {
    const SimScenario& s = config.scenario;
    double t0 = config.harness.t0.value_or(std::isfinite(s.t_min()) ? s.t_min() : 0.0);
    double t1 = config.harness.t1.value_or(std::isfinite(s.t_max()) ? s.t_max() : t0 + 1.0);
    if (!(t0 < t1)) throw ConfigError("harness time range must satisfy t0 < t1");
    return {t0, t1};
}

DynamicReport run_dynamic(const Config& config) {
    const auto [t0, t1] = trajectory_range(config);
    Pipeline pipeline(config.scenario.grid, config.segmentation, config.softness);
    DynamicReport report;
    StatsAccumulator in_range;
    for (const SimSample& sample : generate_trajectory(config.scenario, t0, t1, config.harness.rate)) {
        const FrameOutput out = pipeline.process_frame(sample.frame);
        DynamicRow row{sample.frame.timestamp, sample.truth.theta,  out.raw.theta,
                       out.filtered.theta,     out.filtered.state,  out.filtered.stick_ratio};
        if (row.state != ContactState::MacroSlip && row.theta_true >= config.harness.valid_min &&
            row.theta_true <= config.harness.valid_max) {
            in_range.add(std::abs(row.theta_filtered - row.theta_true));
        }
        report.rows.push_back(row);
    }
    report.in_range = in_range.stats();
    return report;
}

void write_dynamic_csv(std::ostream& out, const DynamicReport& report) {
    out << "t,theta_true,theta_raw,theta_filtered,state,stick_ratio\n";
    for (const auto& r : report.rows) {
        out << format_time(r.t) << ',' << format_angle(r.theta_true) << ',' << format_angle(r.theta_raw) << ','
            << format_angle(r.theta_filtered) << ',' << to_string(r.state) << ',' << format_angle(r.stick_ratio) << '\n';
    }
}

std::string dynamic_summary(const DynamicReport& report) {
    std::ostringstream s;
    s << "dynamic MARE " << format_angle(report.in_range.mean_abs_error) << " +- "
      << format_angle(report.in_range.std_error) << " deg over " << report.in_range.trials << " in-range frames of "
      << report.rows.size() << '\n';
    return s.str();
}

std::size_t simulate_stream(const Config& config, std::ostream& frames, std::ostream* truth) {
    const auto [t0, t1] = trajectory_range(config);
    const auto samples = generate_trajectory(config.scenario, t0, t1, config.harness.rate);
    frames << ndjson::header_line(config.scenario.grid) << '\n';
    if (truth != nullptr) *truth << ndjson::header_line(config.scenario.grid) << '\n';
    for (const auto& sample : samples) {
        frames << ndjson::frame_line(sample.frame) << '\n';
        if (truth != nullptr) *truth << ndjson::truth_line(sample.truth) << '\n';
    }
    return samples.size();
}

StreamStats estimate_from_stream(std::istream& in, std::ostream& out, std::ostream& warnings,
                                 const SegmentationConfig& cfg, const SoftnessParams& softness) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("frame stream is empty: header line missing");
    std::optional<MarkerGrid> grid;
    try {
        grid.emplace(ndjson::parse_header(line));
    } catch (const UsageError& e) {
        throw std::runtime_error(std::string("bad frame stream header: ") + e.what());
    }

    Pipeline pipeline(*grid, cfg, softness);
    StreamStats stats;
    std::size_t line_no = 1;
    double last_t = -std::numeric_limits<double>::infinity();
    out << "t,theta_raw,theta_filtered,state,stick_ratio\n";
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        Frame frame;
        try {
            frame = ndjson::parse_frame(line, *grid);
            if (frame.timestamp < last_t) throw UsageError("timestamp goes backwards");
        } catch (const UsageError& e) {
            warnings << "warning: line " << line_no << ": " << e.what() << ", skipped\n";
            ++stats.skipped;
            continue;
        }
        last_t = frame.timestamp;
        const FrameOutput result = pipeline.process_frame(frame);
        out << format_time(frame.timestamp) << ',';
        write_estimate_cells(out, result.raw, result.filtered);
        out << '\n';
        ++stats.frames;
    }
    return stats;
}

}  // namespace pivotsense
