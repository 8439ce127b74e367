#include "freqdet/config.hpp"

#include <fstream>

#include "freqdet/io.hpp"

namespace freqdet {

GridSpec ExperimentConfig::resolved_grid() const {
  const double bound = scenario.delta_bound();
  GridSpec g;
  g.n_alpha = grid_n_alpha;
  g.lo = grid_lo.value_or(-bound);
  g.hi = grid_hi.value_or(bound);
  g.validate();
  return g;
}

void ExperimentConfig::validate() const {
  try {
    scenario.validate();
    (void)resolved_grid();  // validates the grid
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  if (trials < 1) throw ConfigError("config: trials must be >= 1");
  if (repetitions < 5) throw ConfigError("config: repetitions must be >= 5");
  for (double a : alpha_list) {
    if (!(a > 0.0 && a < 1.0)) throw ConfigError("config: alpha values must lie in (0,1)");
  }
  if (output_dir.empty()) throw ConfigError("config: output_dir must not be empty");
}

nlohmann::json config_to_json(const ExperimentConfig& c) {
  nlohmann::json detectors = nlohmann::json::array();
  for (DetectorId id : c.detector_ids) detectors.push_back(detector_name(id));

  nlohmann::json grid{{"n_alpha", c.grid_n_alpha}};
  if (c.grid_lo) grid["lo"] = *c.grid_lo;
  if (c.grid_hi) grid["hi"] = *c.grid_hi;

  nlohmann::json j{
      {"scenario", scenario_to_json(c.scenario)},
      {"detector_ids", detectors},
      {"grid", grid},
      {"alpha_list", c.alpha_list},
      {"sweep", {{"axis", axis_name(c.sweep_axis)}, {"values", c.sweep_values}}},
      {"trials", c.trials},
      {"master_seed", c.master_seed},
      {"output_dir", c.output_dir},
      {"noiseless", c.noiseless},
      {"repetitions", c.repetitions},
  };
  if (c.hypothesis) j["hypothesis"] = *c.hypothesis == Hypothesis::H0 ? "H0" : "H1";
  if (!c.input.empty()) j["input"] = c.input;
  if (!c.calibration.empty()) j["calibration"] = c.calibration;
  return j;
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
  try {
    ExperimentConfig c;
    c.scenario = scenario_from_json(j.at("scenario"));
    for (const auto& name : j.at("detector_ids"))
      c.detector_ids.push_back(detector_from_name(name.get<std::string>()));
    if (j.contains("grid")) {
      const auto& g = j.at("grid");
      c.grid_n_alpha = g.at("n_alpha").get<std::int64_t>();
      if (g.contains("lo")) c.grid_lo = g.at("lo").get<double>();
      if (g.contains("hi")) c.grid_hi = g.at("hi").get<double>();
    }
    if (j.contains("alpha_list")) c.alpha_list = j.at("alpha_list").get<std::vector<double>>();
    if (j.contains("sweep")) {
      c.sweep_axis = axis_from_name(j.at("sweep").at("axis").get<std::string>());
      c.sweep_values = j.at("sweep").at("values").get<std::vector<double>>();
    }
    if (j.contains("trials")) c.trials = j.at("trials").get<std::int64_t>();
    if (j.contains("master_seed")) c.master_seed = j.at("master_seed").get<std::uint64_t>();
    if (j.contains("output_dir")) c.output_dir = j.at("output_dir").get<std::string>();
    if (j.contains("hypothesis")) {
      const std::string h = j.at("hypothesis").get<std::string>();
      if (h == "H0") c.hypothesis = Hypothesis::H0;
      else if (h == "H1") c.hypothesis = Hypothesis::H1;
      else throw ConfigError("config: hypothesis must be H0 or H1");
    }
    if (j.contains("noiseless")) c.noiseless = j.at("noiseless").get<bool>();
    if (j.contains("repetitions")) c.repetitions = j.at("repetitions").get<std::int64_t>();
    if (j.contains("input")) c.input = j.at("input").get<std::string>();
    if (j.contains("calibration")) c.calibration = j.at("calibration").get<std::string>();
    c.validate();
    return c;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

void apply_override(nlohmann::json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
    throw ConfigError("override must look like key=value: " + assignment);
  const std::string key = assignment.substr(0, eq);
  const std::string value = assignment.substr(eq + 1);

  // dotted path -> JSON pointer
  std::string pointer = "/";
  for (char ch : key) pointer += ch == '.' ? '/' : ch;

  nlohmann::json parsed;
  if (value.find(',') != std::string::npos) {
    parsed = nlohmann::json::array();
    std::size_t start = 0;
    while (start <= value.size()) {
      const auto comma = value.find(',', start);
      const std::string item = value.substr(
          start, comma == std::string::npos ? std::string::npos : comma - start);
      parsed.push_back(nlohmann::json::parse(item, nullptr, false));
      if (parsed.back().is_discarded()) parsed.back() = item;
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
  } else {
    parsed = nlohmann::json::parse(value, nullptr, false);
    if (parsed.is_discarded()) parsed = value;  // bare strings stay strings
  }

  try {
    doc[nlohmann::json::json_pointer(pointer)] = parsed;
  } catch (const std::exception& e) {
    throw ConfigError("cannot apply override '" + assignment + "': " + e.what());
  }
}

ExperimentConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(read_text_file(path));
  } catch (const std::exception& e) {
    throw ConfigError(std::string("cannot read config: ") + e.what());
  }
  for (const std::string& o : overrides) apply_override(doc, o);
  return config_from_json(doc);
}

}  // namespace freqdet
