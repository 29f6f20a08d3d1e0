#pragma once

#include <string>

#include "nvpump/sweep.hpp"

namespace nvpump {

inline constexpr const char* engine_version = "0.1.0";

struct OutputOptions {
  std::string format = "csv";  // csv | json
  std::string path;            // empty means stdout
};

// Fully validated run settings. Defaults reproduce the built-in model with
// pulse 4 ns, wait 150 ns, 400 loops, 300 ns readout, unit power.
struct RunConfig {
  RateConstants rates;
  FixedParams fixed;
  Tolerances tol;
  OutputOptions output;
};

// Parses the JSON config document. Unknown keys are rejected by name; missing
// keys keep their defaults; every value is validated before any computation
// starts. Throws config_error.
RunConfig parse_config(const std::string& text);

// Reads and parses a config file; throws config_error on IO failure.
RunConfig load_config_file(const std::string& path);

}  // namespace nvpump
