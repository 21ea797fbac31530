#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "pivotsense/config.hpp"
#include "pivotsense/contact_sim.hpp"
#include "pivotsense/feature_angles.hpp"
#include "pivotsense/harness.hpp"

namespace py = pybind11;
using namespace pivotsense;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Frame to_frame(const MarkerGrid& grid, const Array& d, double t = 0.0) {
    if (d.ndim() != 2 || d.shape(1) != 3 || static_cast<std::size_t>(d.shape(0)) != grid.size()) {
        throw UsageError("displacements must have shape (" + std::to_string(grid.size()) + ", 3)");
    }
    Frame f;
    f.timestamp = t;
    auto r = d.unchecked<2>();
    f.displacements.reserve(grid.size());
    for (py::ssize_t i = 0; i < r.shape(0); ++i) f.displacements.push_back({r(i, 0), r(i, 1), r(i, 2)});
    return f;
}

Array from_frame(const Frame& f) {
    Array out({static_cast<py::ssize_t>(f.displacements.size()), py::ssize_t{3}});
    auto w = out.mutable_unchecked<2>();
    for (std::size_t i = 0; i < f.displacements.size(); ++i) {
        w(i, 0) = f.displacements[i].x;
        w(i, 1) = f.displacements[i].y;
        w(i, 2) = f.displacements[i].z;
    }
    return out;
}

Array from_vec2s(const std::vector<Vec2>& v) {
    Array out({static_cast<py::ssize_t>(v.size()), py::ssize_t{2}});
    auto w = out.mutable_unchecked<2>();
    for (std::size_t i = 0; i < v.size(); ++i) {
        w(i, 0) = v[i].x;
        w(i, 1) = v[i].y;
    }
    return out;
}

py::array_t<bool> from_bools(const std::vector<bool>& v) {
    py::array_t<bool> out(static_cast<py::ssize_t>(v.size()));
    auto w = out.mutable_unchecked<1>();
    for (std::size_t i = 0; i < v.size(); ++i) w(i) = v[i];
    return out;
}

py::dict estimate_dict(const RotationEstimate& e) {
    py::dict d;
    d["theta"] = e.theta;
    d["state"] = to_string(e.state);
    d["stick_ratio"] = e.stick_ratio;
    d["cor"] = e.cor ? py::object(py::make_tuple(e.cor->x, e.cor->y)) : py::none();
    return d;
}

py::dict output_dict(const FrameOutput& out) {
    py::dict d;
    d["raw"] = estimate_dict(out.raw);
    d["filtered"] = estimate_dict(out.filtered);
    d["contact"] = from_bools(out.mask.flags);
    d["contact_detected"] = out.mask.contact_detected;
    d["center"] = out.mask.center_index ? py::object(py::int_(*out.mask.center_index)) : py::none();
    d["members"] = out.region.members;
    d["mean_angle"] = out.region.mean_angle;
    return d;
}

py::dict stats_dict(const ErrorStats& s) {
    py::dict d;
    d["mare"] = s.mean_abs_error;
    d["std"] = s.std_error;
    d["trials"] = s.trials;
    return d;
}

Config config_with(const Config& base, const std::vector<std::string>& overrides) {
    if (overrides.empty()) return base;
    auto doc = config_to_json(base);
    apply_overrides(doc, overrides);
    return config_from_json(doc);
}

}  // namespace

PYBIND11_MODULE(_pivotsense, m) {
    m.doc() = "Rotation estimation from tactile marker displacement fields";

    py::register_exception<UsageError>(m, "UsageError", PyExc_ValueError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<InsufficientDataError>(m, "InsufficientDataError", PyExc_RuntimeError);

    py::class_<MarkerGrid>(m, "MarkerGrid")
        .def(py::init([](std::size_t rows, std::size_t cols, double pitch, std::pair<double, double> origin) {
                 return MarkerGrid(rows, cols, pitch, {origin.first, origin.second});
             }),
             py::arg("rows"), py::arg("cols"), py::arg("pitch"), py::arg("origin") = std::pair<double, double>{0, 0})
        .def_property_readonly("rows", &MarkerGrid::rows)
        .def_property_readonly("cols", &MarkerGrid::cols)
        .def_property_readonly("pitch", &MarkerGrid::pitch)
        .def_property_readonly("size", &MarkerGrid::size)
        .def("index", &MarkerGrid::index)
        .def("reference_positions", [](const MarkerGrid& g) { return from_vec2s(g.reference_positions()); })
        .def("neighbors",
             [](const MarkerGrid& g, MarkerIndex i) {
                 const auto n = g.neighbors(i);
                 return py::make_tuple(n.left, n.right, n.up, n.down);
             })
        .def("__len__", &MarkerGrid::size)
        .def("__repr__", [](const MarkerGrid& g) {
            return "MarkerGrid(" + std::to_string(g.rows()) + ", " + std::to_string(g.cols()) + ", " +
                   std::to_string(g.pitch()) + ")";
        });

    py::class_<SegmentationConfig>(m, "SegmentationConfig")
        .def(py::init<>())
        .def_readwrite("contact_threshold", &SegmentationConfig::contact_threshold)
        .def_readwrite("normal_filter_ratio", &SegmentationConfig::normal_filter_ratio)
        .def_readwrite("delta_phi_th", &SegmentationConfig::delta_phi_th)
        .def_readwrite("min_stick_markers", &SegmentationConfig::min_stick_markers)
        .def_readwrite("epsilon_angle", &SegmentationConfig::epsilon_angle);

    py::class_<SoftnessParams>(m, "SoftnessParams")
        .def(py::init([](double k, double l_xy, double l_yx) { return SoftnessParams{k, l_xy, l_yx}; }),
             py::arg("k") = 0.0, py::arg("l_xy") = 0.0, py::arg("l_yx") = 0.0)
        .def_readwrite("k", &SoftnessParams::k)
        .def_readwrite("l_xy", &SoftnessParams::l_xy)
        .def_readwrite("l_yx", &SoftnessParams::l_yx);

    py::class_<Config>(m, "Config")
        .def_property_readonly("grid", [](const Config& c) { return c.scenario.grid; })
        .def_readonly("segmentation", &Config::segmentation)
        .def_readonly("softness", &Config::softness)
        .def("to_json", [](const Config& c) { return config_to_json(c).dump(2); })
        .def("with_overrides", &config_with, py::arg("overrides"),
             "Copy with 'section.key=value' overrides applied");

    m.def("preset_names", &preset_names);
    m.def(
        "preset",
        [](const std::string& name, const std::vector<std::string>& overrides) {
            auto doc = parse_json_document(preset_text(name), "preset " + name);
            apply_overrides(doc, overrides);
            return config_from_json(doc);
        },
        py::arg("name"), py::arg("overrides") = std::vector<std::string>{});
    m.def("parse_config", [](const std::string& text) { return parse_config(text); }, py::arg("text"));
    m.def("load_config", &load_config, py::arg("path"));

    m.def(
        "generate_frame",
        [](const Config& cfg, double t, std::uint64_t frame_index) {
            const SimSample s = generate_frame(cfg.scenario, t, frame_index);
            py::dict truth;
            truth["theta"] = s.truth.theta;
            truth["stick"] = from_bools(s.truth.stick_mask);
            truth["contact"] = from_bools(s.truth.contact_mask_true);
            truth["slip"] = from_vec2s(s.truth.slip_field);
            return py::make_tuple(from_frame(s.frame), truth);
        },
        py::arg("config"), py::arg("t") = 0.0, py::arg("frame_index") = 0,
        "Sample the config's scenario: returns (displacements (N, 3), truth dict)");

    m.def(
        "line_feature_angles",
        [](const MarkerGrid& g, const Array& d) {
            const auto a = line_feature_angles(g, to_frame(g, d));
            return py::make_tuple(Array(static_cast<py::ssize_t>(a.angles.size()), a.angles.data()),
                                  from_bools(a.valid));
        },
        py::arg("grid"), py::arg("displacements"));
    m.def(
        "half_curl",
        [](const MarkerGrid& g, const Array& prev, const Array& next) {
            const auto v = half_curl(g, to_frame(g, prev), to_frame(g, next));
            return Array(static_cast<py::ssize_t>(v.size()), v.data());
        },
        py::arg("grid"), py::arg("prev"), py::arg("next"));
    m.def("normalized_angle_difference", &normalized_angle_difference, py::arg("phi_i"), py::arg("phi_bar"),
          py::arg("epsilon") = 0.05);
    m.def(
        "baseline_least_squares",
        [](const MarkerGrid& g, const Array& d, const SegmentationConfig& cfg) {
            const Frame f = to_frame(g, d);
            return estimate_dict(baseline_least_squares(g, f, detect_contact(g, f, cfg)));
        },
        py::arg("grid"), py::arg("displacements"), py::arg("segmentation") = SegmentationConfig{});

    py::class_<Pipeline>(m, "Pipeline")
        .def(py::init<MarkerGrid, SegmentationConfig, SoftnessParams>(), py::arg("grid"),
             py::arg("segmentation") = SegmentationConfig{}, py::arg("softness") = SoftnessParams{})
        .def(
            "process_frame",
            [](Pipeline& p, const Array& d, double t) { return output_dict(p.process_frame(to_frame(p.grid(), d, t))); },
            py::arg("displacements"), py::arg("t"))
        .def(
            "estimate_static",
            [](const Pipeline& p, const Array& d) { return output_dict(p.estimate_static(to_frame(p.grid(), d))); },
            py::arg("displacements"))
        .def("reset", &Pipeline::reset);

    m.def(
        "run_static_sweep",
        [](const Config& cfg) {
            const SweepReport r = run_static_sweep(cfg);
            py::list rows;
            for (const auto& row : r.rows) {
                py::dict d;
                d["theta_true"] = row.theta_true;
                d["proposed"] = stats_dict(row.proposed);
                d["baseline"] = stats_dict(row.baseline);
                d["baseline_insufficient"] = row.baseline_insufficient;
                d["win_rate"] = SweepReport::win_rate(row);
                rows.append(d);
            }
            py::dict d;
            d["rows"] = rows;
            d["proposed"] = stats_dict(r.proposed);
            d["baseline"] = stats_dict(r.baseline);
            d["win_rate"] = r.win_rate();
            return d;
        },
        py::arg("config"));
    m.def(
        "run_dynamic",
        [](const Config& cfg) {
            const DynamicReport r = run_dynamic(cfg);
            const auto n = static_cast<py::ssize_t>(r.rows.size());
            Array t(n), truth(n), raw(n), filtered(n), ratio(n);
            py::list states;
            for (py::ssize_t i = 0; i < n; ++i) {
                const auto& row = r.rows[static_cast<std::size_t>(i)];
                t.mutable_at(i) = row.t;
                truth.mutable_at(i) = row.theta_true;
                raw.mutable_at(i) = row.theta_raw;
                filtered.mutable_at(i) = row.theta_filtered;
                ratio.mutable_at(i) = row.stick_ratio;
                states.append(to_string(row.state));
            }
            py::dict d;
            d["t"] = t;
            d["theta_true"] = truth;
            d["theta_raw"] = raw;
            d["theta_filtered"] = filtered;
            d["state"] = states;
            d["stick_ratio"] = ratio;
            d["in_range"] = stats_dict(r.in_range);
            return d;
        },
        py::arg("config"));
}
