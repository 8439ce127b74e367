// ============================================================================
// config.hpp -- experiment configuration for the CLI
// ============================================================================
#pragma once
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "freqdet/detectors.hpp"
#include "freqdet/montecarlo.hpp"
#include "freqdet/scenario.hpp"

namespace freqdet {

/// Thrown for unreadable or invalid configuration (CLI exit code 2).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  Scenario scenario;
  std::vector<DetectorId> detector_ids;
  std::int64_t grid_n_alpha = 2000;
  std::optional<double> grid_lo;  ///< default: -omega0*pi/gamma
  std::optional<double> grid_hi;  ///< default: +omega0*pi/gamma
  std::vector<double> alpha_list;
  CurveAxis sweep_axis = CurveAxis::DELTA;
  std::vector<double> sweep_values;
  std::int64_t trials = 10000;
  std::uint64_t master_seed = 1;
  std::string output_dir = "out";

  // subcommand-specific optional settings
  std::optional<Hypothesis> hypothesis;  ///< generate: default H1 iff delta != 0
  bool noiseless = false;                ///< generate: omit the noise term
  std::int64_t repetitions = 11;         ///< bench
  std::string input;                     ///< detect: observation CSV
  std::string calibration;               ///< detect: CalibratedDetector JSON (optional)

  [[nodiscard]] GridSpec resolved_grid() const;
  void validate() const;  // throws ConfigError
};

nlohmann::json config_to_json(const ExperimentConfig& c);
ExperimentConfig config_from_json(const nlohmann::json& j);  // throws ConfigError

/// Applies one "key=value" override onto the raw JSON document.  Keys use
/// dotted paths ("scenario.N", "sweep.axis"); values parse as JSON when
/// possible and as strings otherwise; comma lists become arrays.
void apply_override(nlohmann::json& doc, const std::string& assignment);  // throws ConfigError

ExperimentConfig load_config(const std::string& path,
                             const std::vector<std::string>& overrides);  // throws ConfigError

}  // namespace freqdet
