#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "nvpump/config.hpp"

namespace nvpump {

// All numeric output carries 12 significant digits.
std::string fmt12(double v);

// The double that fmt12's text parses back to; applied before JSON
// serialization so re-parsing reproduces the output exactly.
double round12(double v);

// Minimal CSV assembly: header row, fmt12 cells, '\n' line endings.
class CsvBuilder {
 public:
  explicit CsvBuilder(const std::vector<std::string>& header);

  void add_row(const std::vector<double>& cells);
  const std::string& str() const { return text_; }

 private:
  std::string text_;
  size_t n_cols_;
};

void write_text_file(const std::string& path, const std::string& content);

// `meta` section shared by every JSON document: config echo plus engine
// version.
nlohmann::json meta_json(const RunConfig& cfg, const std::string& command);

nlohmann::json state_json(const StateVector& p);
nlohmann::json result_json(const SimulationResult& r);
nlohmann::json sweep_json(const SweepResult& r);
nlohmann::json rabi_json(const RabiCurve& c);

}  // namespace nvpump
