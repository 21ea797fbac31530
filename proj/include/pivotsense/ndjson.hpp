#pragma once

#include <ostream>
#include <string>
#include <string_view>

#include "pivotsense/contact_sim.hpp"
#include "pivotsense/core.hpp"

namespace pivotsense::ndjson {

// Frame stream layout, one JSON object per line:
//   {"rows":R,"cols":C,"pitch":P,"origin":[x,y]}        header, first line
//   {"t":seconds,"d":[[dx,dy,dz],...]}                  one per frame, row-major
// Doubles are written in shortest round-trip form, so parsing a written
// stream reproduces the frames bit for bit.

std::string header_line(const MarkerGrid& grid);
std::string frame_line(const Frame& frame);
std::string truth_line(const GroundTruth& truth);

/// Throws UsageError on a malformed header.
MarkerGrid parse_header(std::string_view line);

/// Throws UsageError on malformed JSON, wrong marker count, or non-finite
/// values (including JSON null standing in for NaN).
Frame parse_frame(std::string_view line, const MarkerGrid& grid);

}  // namespace pivotsense::ndjson
