#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "pivotsense/contact_sim.hpp"
#include "pivotsense/segmentation.hpp"

namespace pivotsense {

struct HarnessOptions {
    std::size_t trials = 25;
    int angle_min = 2;  // degrees, static sweep range (integer steps)
    int angle_max = 20;
    double rate = 30.0;  // Hz
    std::optional<double> t0;
    std::optional<double> t1;
    double valid_min = 2.0;  // degrees, in-range window for dynamic MARE
    double valid_max = 20.0;
};

/// Everything a harness run needs, loaded from one JSON document with the
/// sections {grid, scenario, segmentation, softness, harness}.
struct Config {
    SimScenario scenario;
    SegmentationConfig segmentation;
    SoftnessParams softness;  // estimator-side softness
    HarnessOptions harness;
};

/// Parses a config document. Unknown keys, wrong types and out-of-range
/// values raise ConfigError naming the offending field; JSON syntax errors
/// carry the line and column.
Config parse_config(std::string_view text, const std::string& source = "<config>");
Config config_from_json(const nlohmann::json& doc);
Config load_config(const std::string& path);

/// Reads a JSON document from a string or file without interpreting it.
nlohmann::json parse_json_document(std::string_view text, const std::string& source);
nlohmann::json read_json_file(const std::string& path);

/// Applies "section.key=value" overrides; the value is parsed as JSON when
/// possible and taken as a string otherwise.
void apply_overrides(nlohmann::json& doc, const std::vector<std::string>& overrides);

/// Full document for a config, suitable for parse_config.
nlohmann::json config_to_json(const Config& config);

/// Names of the compiled-in presets ("full-stick", "annulus", "three-lift").
std::vector<std::string> preset_names();
std::string_view preset_text(std::string_view name);

}  // namespace pivotsense
