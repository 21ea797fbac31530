#include "pivotsense/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "pivotsense/presets_generated.hpp"

namespace pivotsense {

using nlohmann::json;

namespace {

// View over one config section that rejects keys nobody asked for.
class Section {
  public:
    Section(const json& doc, std::string name) : name_(std::move(name)) {
        if (!doc.contains(name_)) return;
        node_ = &doc.at(name_);
        if (!node_->is_object()) fail(name_, "expected an object");
    }

    const json* get(const std::string& key) {
        known_.insert(key);
        if (node_ == nullptr || !node_->contains(key)) return nullptr;
        const json* v = &node_->at(key);
        return v->is_null() ? nullptr : v;
    }

    double number(const std::string& key, double fallback) {
        const json* v = get(key);
        if (v == nullptr) return fallback;
        if (!v->is_number()) fail(path(key), "expected a number");
        return v->get<double>();
    }

    std::optional<double> optional_number(const std::string& key) {
        const json* v = get(key);
        if (v == nullptr) return std::nullopt;
        if (!v->is_number()) fail(path(key), "expected a number");
        return v->get<double>();
    }

    std::uint64_t count(const std::string& key, std::uint64_t fallback) {
        const json* v = get(key);
        if (v == nullptr) return fallback;
        if (!v->is_number_unsigned() && !(v->is_number_integer() && v->get<std::int64_t>() >= 0)) {
            fail(path(key), "expected a non-negative integer");
        }
        return v->get<std::uint64_t>();
    }

    int integer(const std::string& key, int fallback) {
        const json* v = get(key);
        if (v == nullptr) return fallback;
        if (!v->is_number_integer()) fail(path(key), "expected an integer");
        return v->get<int>();
    }

    std::optional<Vec2> vec2(const std::string& key) {
        const json* v = get(key);
        if (v == nullptr) return std::nullopt;
        return to_vec2(*v, path(key));
    }

    ScalarTrajectory scalar_trajectory(const std::string& key, const ScalarTrajectory& fallback) {
        const json* v = get(key);
        if (v == nullptr) return fallback;
        if (v->is_number()) return ScalarTrajectory(v->get<double>());
        if (!v->is_array() || v->empty()) fail(path(key), "expected a number or a list of [t, value] breakpoints");
        std::vector<ScalarTrajectory::Breakpoint> points;
        for (const auto& bp : *v) {
            if (!bp.is_array() || bp.size() != 2 || !bp[0].is_number() || !bp[1].is_number()) {
                fail(path(key), "breakpoints must be [t, value] pairs");
            }
            points.emplace_back(bp[0].get<double>(), bp[1].get<double>());
        }
        return wrap(path(key), [&] { return ScalarTrajectory(std::move(points)); });
    }

    VectorTrajectory vector_trajectory(const std::string& key, const VectorTrajectory& fallback) {
        const json* v = get(key);
        if (v == nullptr) return fallback;
        if (v->is_array() && v->size() == 2 && (*v)[0].is_number()) return VectorTrajectory(to_vec2(*v, path(key)));
        if (!v->is_array() || v->empty()) fail(path(key), "expected [x, y] or a list of [t, x, y] breakpoints");
        std::vector<VectorTrajectory::Breakpoint> points;
        for (const auto& bp : *v) {
            if (!bp.is_array() || bp.size() != 3 || !bp[0].is_number() || !bp[1].is_number() || !bp[2].is_number()) {
                fail(path(key), "breakpoints must be [t, x, y] triples");
            }
            points.emplace_back(bp[0].get<double>(), Vec2{bp[1].get<double>(), bp[2].get<double>()});
        }
        return wrap(path(key), [&] { return VectorTrajectory(std::move(points)); });
    }

    void finish() const {
        if (node_ == nullptr) return;
        for (const auto& [key, value] : node_->items()) {
            if (!known_.contains(key)) fail(path(key), "unknown key");
        }
    }

    std::string path(const std::string& key) const { return name_ + "." + key; }

    [[noreturn]] static void fail(const std::string& field, const std::string& what) {
        throw ConfigError("config field '" + field + "': " + what);
    }

  private:
    static Vec2 to_vec2(const json& v, const std::string& field) {
        if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
            fail(field, "expected [x, y]");
        }
        return {v[0].get<double>(), v[1].get<double>()};
    }

    template <typename F>
    static auto wrap(const std::string& field, F&& build) -> decltype(build()) {
        try {
            return build();
        } catch (const UsageError& e) {
            fail(field, e.what());
        }
    }

    std::string name_;
    const json* node_ = nullptr;
    std::set<std::string> known_;
};

template <typename Value>
json trajectory_to_json(const PiecewiseLinear<Value>& traj) {
    auto value = [](const Value& v) {
        if constexpr (std::is_same_v<Value, Vec2>) {
            return json::array({v.x, v.y});
        } else {
            return json(v);
        }
    };
    if (traj.is_constant()) return value(traj.breakpoints().front().second);
    json out = json::array();
    for (const auto& [t, v] : traj.breakpoints()) {
        if constexpr (std::is_same_v<Value, Vec2>) {
            out.push_back(json::array({t, v.x, v.y}));
        } else {
            out.push_back(json::array({t, v}));
        }
    }
    return out;
}

}  // namespace

json parse_json_document(std::string_view text, const std::string& source) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(source + ": " + e.what());
    }
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_json_document(buf.str(), path);
}

Config config_from_json(const json& doc) {
    if (!doc.is_object()) throw ConfigError("config document must be a JSON object");
    static const std::set<std::string> sections{"grid", "scenario", "segmentation", "softness", "harness"};
    for (const auto& [key, value] : doc.items()) {
        if (!sections.contains(key)) throw ConfigError("config field '" + key + "': unknown section");
    }

    Section g(doc, "grid");
    const auto rows = g.count("rows", 20);
    const auto cols = g.count("cols", 20);
    const double pitch = g.number("pitch", 1.0);
    const Vec2 origin = g.vec2("origin").value_or(Vec2{});
    g.finish();
    std::optional<MarkerGrid> grid;
    try {
        grid.emplace(rows, cols, pitch, origin);
    } catch (const UsageError& e) {
        throw ConfigError(std::string("config section 'grid': ") + e.what());
    }

    Config cfg{SimScenario::centered(*grid), {}, {}, {}};
    SimScenario& s = cfg.scenario;
    Section sc(doc, "scenario");
    s.contact_radius = sc.number("contact_radius", s.contact_radius);
    s.max_indent = sc.scalar_trajectory("max_indent", s.max_indent);
    s.cor = sc.vec2("cor").value_or(grid->center());
    s.stick_radius = sc.scalar_trajectory("stick_radius", s.stick_radius);
    s.theta = sc.scalar_trajectory("theta", s.theta);
    s.translation = sc.vector_trajectory("translation", s.translation);
    s.decay_exponent = sc.number("decay_exponent", s.decay_exponent);
    s.softness.k = sc.number("k", s.softness.k);
    s.noise_sigma = sc.number("noise_sigma", s.noise_sigma);
    s.rng_seed = sc.count("seed", s.rng_seed);
    sc.finish();
    try {
        s.validate();
    } catch (const UsageError& e) {
        throw ConfigError(std::string("config section 'scenario': ") + e.what());
    }

    Section seg(doc, "segmentation");
    SegmentationConfig& c = cfg.segmentation;
    c.contact_threshold = seg.number("contact_threshold", c.contact_threshold);
    c.normal_filter_ratio = seg.number("normal_filter_ratio", c.normal_filter_ratio);
    c.delta_phi_th = seg.number("delta_phi_th", c.delta_phi_th);
    c.min_stick_markers = seg.count("min_stick_markers", c.min_stick_markers);
    c.epsilon_angle = seg.number("epsilon_angle", c.epsilon_angle);
    seg.finish();
    try {
        c.validate();
    } catch (const UsageError& e) {
        throw ConfigError(std::string("config section 'segmentation': ") + e.what());
    }

    Section soft(doc, "softness");
    cfg.softness.k = soft.number("k", 0.0);
    cfg.softness.l_xy = soft.number("l_xy", 0.0);
    cfg.softness.l_yx = soft.number("l_yx", 0.0);
    soft.finish();
    try {
        cfg.softness.validate();
    } catch (const UsageError& e) {
        throw ConfigError(std::string("config section 'softness': ") + e.what());
    }

    Section h(doc, "harness");
    HarnessOptions& ho = cfg.harness;
    ho.trials = h.count("trials", ho.trials);
    ho.angle_min = h.integer("angle_min", ho.angle_min);
    ho.angle_max = h.integer("angle_max", ho.angle_max);
    ho.rate = h.number("rate", ho.rate);
    ho.t0 = h.optional_number("t0");
    ho.t1 = h.optional_number("t1");
    ho.valid_min = h.number("valid_min", ho.valid_min);
    ho.valid_max = h.number("valid_max", ho.valid_max);
    h.finish();
    if (ho.trials < 1) Section::fail("harness.trials", "must be at least 1");
    if (ho.angle_min > ho.angle_max) Section::fail("harness.angle_min", "must not exceed angle_max");
    if (!(ho.rate > 0.0)) Section::fail("harness.rate", "must be positive");
    return cfg;
}

Config parse_config(std::string_view text, const std::string& source) {
    return config_from_json(parse_json_document(text, source));
}

Config load_config(const std::string& path) { return config_from_json(read_json_file(path)); }

void apply_overrides(json& doc, const std::vector<std::string>& overrides) {
    for (const auto& item : overrides) {
        const auto eq = item.find('=');
        const auto dot = item.find('.');
        if (eq == std::string::npos || dot == std::string::npos || dot > eq) {
            throw ConfigError("override '" + item + "' must look like section.key=value");
        }
        const std::string section = item.substr(0, dot);
        const std::string key = item.substr(dot + 1, eq - dot - 1);
        const std::string raw = item.substr(eq + 1);
        json value = json::parse(raw, nullptr, false);
        if (value.is_discarded()) value = raw;
        if (!doc.is_object()) doc = json::object();
        doc[section][key] = std::move(value);
    }
}

json config_to_json(const Config& config) {
    const SimScenario& s = config.scenario;
    const MarkerGrid& g = s.grid;
    json doc;
    doc["grid"] = {{"rows", g.rows()}, {"cols", g.cols()}, {"pitch", g.pitch()}, {"origin", {g.origin().x, g.origin().y}}};
    doc["scenario"] = {{"contact_radius", s.contact_radius},
                       {"max_indent", trajectory_to_json(s.max_indent)},
                       {"cor", {s.cor.x, s.cor.y}},
                       {"stick_radius", trajectory_to_json(s.stick_radius)},
                       {"theta", trajectory_to_json(s.theta)},
                       {"translation", trajectory_to_json(s.translation)},
                       {"decay_exponent", s.decay_exponent},
                       {"k", s.softness.k},
                       {"noise_sigma", s.noise_sigma},
                       {"seed", s.rng_seed}};
    const SegmentationConfig& c = config.segmentation;
    doc["segmentation"] = {{"contact_threshold", c.contact_threshold},
                           {"normal_filter_ratio", c.normal_filter_ratio},
                           {"delta_phi_th", c.delta_phi_th},
                           {"min_stick_markers", c.min_stick_markers},
                           {"epsilon_angle", c.epsilon_angle}};
    doc["softness"] = {{"k", config.softness.k}, {"l_xy", config.softness.l_xy}, {"l_yx", config.softness.l_yx}};
    const HarnessOptions& h = config.harness;
    doc["harness"] = {{"trials", h.trials},       {"angle_min", h.angle_min}, {"angle_max", h.angle_max},
                      {"rate", h.rate},           {"valid_min", h.valid_min}, {"valid_max", h.valid_max}};
    if (h.t0) doc["harness"]["t0"] = *h.t0;
    if (h.t1) doc["harness"]["t1"] = *h.t1;
    return doc;
}

std::vector<std::string> preset_names() {
    std::vector<std::string> names;
    for (const auto& [name, text] : presets::kAll) names.emplace_back(name);
    return names;
}

std::string_view preset_text(std::string_view name) {
    for (const auto& [preset, text] : presets::kAll) {
        if (preset == name) return text;
    }
    throw ConfigError("unknown preset '" + std::string(name) + "'");
}

}  // namespace pivotsense
