#pragma once

#include <string>
#include <vector>

#include "nvpump/config.hpp"

namespace nvpump {

// Writes every simulated dataset (polarization vs loop count, vs pulse
// width, vs wait time, per-loop transfer records, dwell-time relation) as
// CSV files into `dir`. Returns the file names in their fixed order. Output
// depends only on the config, byte for byte.
std::vector<std::string> write_figures(const RunConfig& cfg, const std::string& dir,
                                       int threads = 1);

}  // namespace nvpump
