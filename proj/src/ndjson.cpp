#include "pivotsense/ndjson.hpp"

#include "json.hpp"

namespace pivotsense::ndjson {

using nlohmann::json;

namespace {

json parse_object(std::string_view line, const char* what) {
    json doc = json::parse(line, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) {
        throw UsageError(std::string(what) + " is not a JSON object");
    }
    return doc;
}

double finite_number(const json& v, const char* what) {
    if (!v.is_number()) throw UsageError(std::string(what) + " is not a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw UsageError(std::string(what) + " is not finite");
    return x;
}

}  // namespace

std::string header_line(const MarkerGrid& grid) {
    json h = {{"rows", grid.rows()},
              {"cols", grid.cols()},
              {"pitch", grid.pitch()},
              {"origin", {grid.origin().x, grid.origin().y}}};
    return h.dump();
}

std::string frame_line(const Frame& frame) {
    json d = json::array();
    for (const auto& v : frame.displacements) d.push_back({v.x, v.y, v.z});
    return json{{"t", frame.timestamp}, {"d", std::move(d)}}.dump();
}

std::string truth_line(const GroundTruth& truth) {
    json stick = json::array();
    json contact = json::array();
    json slip = json::array();
    for (std::size_t i = 0; i < truth.stick_mask.size(); ++i) {
        stick.push_back(truth.stick_mask[i] ? 1 : 0);
        contact.push_back(truth.contact_mask_true[i] ? 1 : 0);
        slip.push_back({truth.slip_field[i].x, truth.slip_field[i].y});
    }
    return json{{"t", truth.timestamp},
                {"theta", truth.theta},
                {"stick", std::move(stick)},
                {"contact", std::move(contact)},
                {"slip", std::move(slip)}}
        .dump();
}

MarkerGrid parse_header(std::string_view line) {
    const json h = parse_object(line, "header");
    for (const char* key : {"rows", "cols", "pitch"}) {
        if (!h.contains(key)) throw UsageError(std::string("header is missing '") + key + "'");
    }
    if (!h["rows"].is_number_unsigned() || !h["cols"].is_number_unsigned()) {
        throw UsageError("header rows/cols must be positive integers");
    }
    Vec2 origin;
    if (h.contains("origin")) {
        const json& o = h["origin"];
        if (!o.is_array() || o.size() != 2) throw UsageError("header origin must be [x, y]");
        origin = {finite_number(o[0], "header origin"), finite_number(o[1], "header origin")};
    }
    return MarkerGrid(h["rows"].get<std::size_t>(), h["cols"].get<std::size_t>(),
                      finite_number(h["pitch"], "header pitch"), origin);
}

Frame parse_frame(std::string_view line, const MarkerGrid& grid) {
    const json doc = parse_object(line, "frame");
    if (!doc.contains("t") || !doc.contains("d")) throw UsageError("frame needs 't' and 'd'");
    Frame frame;
    frame.timestamp = finite_number(doc["t"], "frame time");
    const json& d = doc["d"];
    if (!d.is_array() || d.size() != grid.size()) {
        throw UsageError("frame must carry " + std::to_string(grid.size()) + " displacements");
    }
    frame.displacements.reserve(grid.size());
    for (const auto& v : d) {
        if (!v.is_array() || v.size() != 3) throw UsageError("displacement must be [dx, dy, dz]");
        frame.displacements.push_back(
            {finite_number(v[0], "displacement"), finite_number(v[1], "displacement"), finite_number(v[2], "displacement")});
    }
    return frame;
}

}  // namespace pivotsense::ndjson
