#include "nvpump/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "nvpump/errors.hpp"

namespace nvpump {

using nlohmann::json;

std::string fmt12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

double round12(double v) { return std::strtod(fmt12(v).c_str(), nullptr); }

CsvBuilder::CsvBuilder(const std::vector<std::string>& header) : n_cols_(header.size()) {
  for (size_t i = 0; i < header.size(); ++i) {
    if (i) text_ += ',';
    text_ += header[i];
  }
  text_ += '\n';
}

void CsvBuilder::add_row(const std::vector<double>& cells) {
  if (cells.size() != n_cols_)
    throw error("csv row has " + std::to_string(cells.size()) + " cells, header has " +
                std::to_string(n_cols_));
  for (size_t i = 0; i < cells.size(); ++i) {
    if (i) text_ += ',';
    text_ += fmt12(cells[i]);
  }
  text_ += '\n';
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw error("cannot open output file \"" + path + "\"");
  out << content;
  if (!out) throw error("failed writing output file \"" + path + "\"");
}

json meta_json(const RunConfig& cfg, const std::string& command) {
  json rates = {{"k13", round12(cfg.rates.k13)}, {"k24", round12(cfg.rates.k24)},
                {"k31", round12(cfg.rates.k31)}, {"k42", round12(cfg.rates.k42)},
                {"k32", round12(cfg.rates.k32)}, {"k41", round12(cfg.rates.k41)},
                {"k35", round12(cfg.rates.k35)}, {"k45", round12(cfg.rates.k45)},
                {"k56", round12(cfg.rates.k56)}, {"k61", round12(cfg.rates.k61)},
                {"k62", round12(cfg.rates.k62)}};
  json fixed = {{"t_s", round12(cfg.fixed.pulse_ns)},
                {"t_w", round12(cfg.fixed.wait_ns)},
                {"n", cfg.fixed.loops},
                {"t_read", round12(cfg.fixed.t_read_ns)},
                {"power_scale", round12(cfg.fixed.power)}};
  json tol = {{"steady_tol", round12(cfg.tol.steady_tol)}, {"n_max", cfg.tol.max_loops}};
  return json{{"engine_version", engine_version},
              {"command", command},
              {"rates", rates},
              {"fixed", fixed},
              {"tolerances", tol}};
}

json state_json(const StateVector& p) {
  json a = json::array();
  for (int i = 0; i < n_levels; ++i) a.push_back(round12(p[i]));
  return a;
}

json result_json(const SimulationResult& r) {
  json out = {{"final_state", state_json(r.final_state)},
              {"polarization", round12(r.polarization)},
              {"singlet_dwell_ns", round12(r.singlet_dwell_ns)},
              {"photon_integral", round12(r.photon_integral)}};
  if (r.converged_at) out["converged_at"] = *r.converged_at;
  if (!r.per_loop.empty()) {
    json rows = json::array();
    for (const LoopRecord& rec : r.per_loop)
      rows.push_back({{"loop", rec.loop},
                      {"polarization", round12(rec.polarization)},
                      {"p21", round12(rec.p21)},
                      {"p12", round12(rec.p12)}});
    out["per_loop"] = rows;
  }
  return out;
}

json sweep_json(const SweepResult& r) {
  json rows = json::array();
  for (const SweepRow& row : r.rows)
    rows.push_back({{sweep_variable_name(r.spec.variable), round12(row.value)},
                    {"polarization", round12(row.polarization)},
                    {"contrast", round12(row.contrast)},
                    {"singlet_dwell_ns", round12(row.singlet_dwell_ns)},
                    {"loops_to_converge", row.loops}});
  return json{{"variable", sweep_variable_name(r.spec.variable)}, {"rows", rows}};
}

json rabi_json(const RabiCurve& c) {
  json pts = json::array();
  for (const RabiPoint& pt : c.points)
    pts.push_back({{"theta", round12(pt.theta)}, {"counts", round12(pt.counts)}});
  return json{{"points", pts},
              {"i_max", round12(c.i_max)},
              {"i_min", round12(c.i_min)},
              {"contrast", round12(c.contrast)},
              {"fit_residual", round12(c.fit_residual)}};
}

}  // namespace nvpump
