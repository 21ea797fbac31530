// pivotsense: synthetic pivoting experiments and stream estimation.
//
//   pivotsense simulate --preset three-lift --out frames.ndjson --truth truth.ndjson
//   pivotsense estimate frames.ndjson > estimates.csv
//   pivotsense sweep    --preset full-stick --trials 25
//   pivotsense dynamic  --preset three-lift --out dynamic.csv
//   pivotsense compare  --preset annulus --set harness.angle_min=10
//
// Exit codes: 0 success, 1 runtime/data error, 2 config/usage error.

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pivotsense/config.hpp"
#include "pivotsense/harness.hpp"

namespace {

using namespace pivotsense;

struct CommonOptions {
    std::string config_path;
    std::string preset;
    std::vector<std::string> overrides;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> trials;
    std::string out_path;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
    auto* config = cmd->add_option("--config", opts.config_path, "JSON config document");
    cmd->add_option("--preset", opts.preset, "built-in config (full-stick, annulus, three-lift)")->excludes(config);
    cmd->add_option("--set", opts.overrides, "override a config key, e.g. scenario.noise_sigma=0");
    cmd->add_option("--seed", opts.seed, "scenario RNG seed");
    cmd->add_option("--trials", opts.trials, "trials per angle (sweep, compare)");
    cmd->add_option("--out", opts.out_path, "output file (default: standard output)");
}

Config resolve_config(const CommonOptions& opts) {
    nlohmann::json doc = nlohmann::json::object();
    if (!opts.config_path.empty()) {
        doc = read_json_file(opts.config_path);
    } else if (!opts.preset.empty()) {
        doc = parse_json_document(preset_text(opts.preset), "preset " + opts.preset);
    }
    std::vector<std::string> overrides = opts.overrides;
    if (opts.seed) overrides.push_back("scenario.seed=" + std::to_string(*opts.seed));
    if (opts.trials) overrides.push_back("harness.trials=" + std::to_string(*opts.trials));
    apply_overrides(doc, overrides);
    return config_from_json(doc);
}

// Writes to --out when given, otherwise to stdout.
class Output {
  public:
    explicit Output(const std::string& path) {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) throw std::runtime_error("cannot open '" + path + "' for writing");
        }
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }
    bool to_file() const { return file_ != nullptr; }

  private:
    std::unique_ptr<std::ofstream> file_;
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Incipient-slip-aware rotation measurement on synthetic and recorded marker streams"};
    app.require_subcommand(1);

    CommonOptions simulate_opts;
    std::string truth_path;
    auto* simulate = app.add_subcommand("simulate", "emit a scenario as an NDJSON frame stream");
    add_common(simulate, simulate_opts);
    simulate->add_option("--truth", truth_path, "also write ground truth NDJSON here");

    CommonOptions estimate_opts;
    std::string input_path = "-";
    auto* estimate = app.add_subcommand("estimate", "estimate rotation from an NDJSON frame stream");
    add_common(estimate, estimate_opts);
    estimate->add_option("input", input_path, "NDJSON frame stream ('-' for standard input)");

    CommonOptions sweep_opts;
    auto* sweep = app.add_subcommand("sweep", "static protocol: per-angle error statistics");
    add_common(sweep, sweep_opts);

    CommonOptions dynamic_opts;
    auto* dynamic = app.add_subcommand("dynamic", "dynamic protocol: filtered trajectory estimates");
    add_common(dynamic, dynamic_opts);

    CommonOptions compare_opts;
    auto* compare = app.add_subcommand("compare", "proposed vs least-squares baseline");
    add_common(compare, compare_opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (simulate->parsed()) {
            const Config cfg = resolve_config(simulate_opts);
            Output out(simulate_opts.out_path);
            std::unique_ptr<std::ofstream> truth;
            if (!truth_path.empty()) {
                truth = std::make_unique<std::ofstream>(truth_path);
                if (!*truth) throw std::runtime_error("cannot open '" + truth_path + "' for writing");
            }
            const auto n = simulate_stream(cfg, out.stream(), truth.get());
            std::cerr << "wrote " << n << " frames\n";
        } else if (estimate->parsed()) {
            const Config cfg = resolve_config(estimate_opts);
            Output out(estimate_opts.out_path);
            std::ifstream file;
            std::istream* in = &std::cin;
            if (input_path != "-") {
                file.open(input_path);
                if (!file) throw std::runtime_error("cannot open '" + input_path + "'");
                in = &file;
            }
            const auto stats = estimate_from_stream(*in, out.stream(), std::cerr, cfg.segmentation, cfg.softness);
            if (stats.skipped > 0) std::cerr << stats.skipped << " malformed line(s) skipped\n";
        } else if (sweep->parsed() || compare->parsed()) {
            const bool is_sweep = sweep->parsed();
            const Config cfg = resolve_config(is_sweep ? sweep_opts : compare_opts);
            Output out(is_sweep ? sweep_opts.out_path : compare_opts.out_path);
            const SweepReport report = is_sweep ? run_static_sweep(cfg) : compare_estimators(cfg);
            if (is_sweep) {
                write_sweep_csv(out.stream(), report);
            } else {
                write_comparison_csv(out.stream(), report);
            }
            (out.to_file() ? std::cout : std::cerr) << (is_sweep ? sweep_summary(report) : comparison_summary(report));
        } else if (dynamic->parsed()) {
            const Config cfg = resolve_config(dynamic_opts);
            Output out(dynamic_opts.out_path);
            const DynamicReport report = run_dynamic(cfg);
            write_dynamic_csv(out.stream(), report);
            (out.to_file() ? std::cout : std::cerr) << dynamic_summary(report);
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
