#include "nvpump/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "nvpump/errors.hpp"

namespace nvpump {

namespace {

using nlohmann::json;

double require_number(const json& v, const std::string& where) {
  if (!v.is_number()) throw config_error(where + " must be a number");
  return v.get<double>();
}

int require_int(const json& v, const std::string& where) {
  if (!v.is_number_integer()) throw config_error(where + " must be an integer");
  return v.get<int>();
}

void parse_rates(const json& j, RateConstants& rates) {
  if (!j.is_object()) throw config_error("\"rates\" must be an object");
  for (const auto& [key, val] : j.items()) {
    double* field = nullptr;
    if (key == "k13") field = &rates.k13;
    else if (key == "k24") field = &rates.k24;
    else if (key == "k31") field = &rates.k31;
    else if (key == "k42") field = &rates.k42;
    else if (key == "k32") field = &rates.k32;
    else if (key == "k41") field = &rates.k41;
    else if (key == "k35") field = &rates.k35;
    else if (key == "k45") field = &rates.k45;
    else if (key == "k56") field = &rates.k56;
    else if (key == "k61") field = &rates.k61;
    else if (key == "k62") field = &rates.k62;
    else throw config_error("unknown rate \"" + key + "\"");
    *field = require_number(val, "rates." + key);
  }
}

void parse_fixed(const json& j, FixedParams& fixed) {
  if (!j.is_object()) throw config_error("\"fixed\" must be an object");
  for (const auto& [key, val] : j.items()) {
    if (key == "t_s") fixed.pulse_ns = require_number(val, "fixed.t_s");
    else if (key == "t_w") fixed.wait_ns = require_number(val, "fixed.t_w");
    else if (key == "n") fixed.loops = require_int(val, "fixed.n");
    else if (key == "t_read") fixed.t_read_ns = require_number(val, "fixed.t_read");
    else if (key == "power_scale") fixed.power = require_number(val, "fixed.power_scale");
    else throw config_error("unknown fixed parameter \"" + key + "\"");
  }
}

void parse_tolerances(const json& j, Tolerances& tol) {
  if (!j.is_object()) throw config_error("\"tolerances\" must be an object");
  for (const auto& [key, val] : j.items()) {
    if (key == "steady_tol") tol.steady_tol = require_number(val, "tolerances.steady_tol");
    else if (key == "n_max") tol.max_loops = require_int(val, "tolerances.n_max");
    else throw config_error("unknown tolerance \"" + key + "\"");
  }
}

void parse_output(const json& j, OutputOptions& out) {
  if (!j.is_object()) throw config_error("\"output\" must be an object");
  for (const auto& [key, val] : j.items()) {
    if (key == "format") {
      if (!val.is_string()) throw config_error("output.format must be a string");
      out.format = val.get<std::string>();
      if (out.format != "csv" && out.format != "json")
        throw config_error("output.format must be \"csv\" or \"json\", got \"" + out.format +
                           "\"");
    } else if (key == "path") {
      if (!val.is_string()) throw config_error("output.path must be a string");
      out.path = val.get<std::string>();
    } else {
      throw config_error("unknown output option \"" + key + "\"");
    }
  }
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw config_error(std::string("config parse error: ") + e.what());
  }
  if (!j.is_object()) throw config_error("config root must be a JSON object");

  RunConfig cfg;
  for (const auto& [key, val] : j.items()) {
    if (key == "rates") parse_rates(val, cfg.rates);
    else if (key == "fixed") parse_fixed(val, cfg.fixed);
    else if (key == "tolerances") parse_tolerances(val, cfg.tol);
    else if (key == "output") parse_output(val, cfg.output);
    else throw config_error("unknown config key \"" + key + "\"");
  }

  // Fail fast: everything downstream assumes these already hold.
  try {
    cfg.rates.validate();
    cfg.fixed.validate();
    cfg.tol.validate();
  } catch (const error& e) {
    throw config_error(e.what());
  }
  return cfg;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw config_error("cannot open config file \"" + path + "\"");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace nvpump
