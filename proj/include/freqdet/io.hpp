// ============================================================================
// io.hpp -- CSV and JSON serialization
//
// Numbers in CSV files are printed with 17 significant digits ("%.17g") so
// reruns can be compared byte for byte.
// ============================================================================
#pragma once
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "freqdet/bench.hpp"
#include "freqdet/montecarlo.hpp"
#include "freqdet/scenario.hpp"

namespace freqdet {

/// Shortest-roundtrip-but-fixed formatting: 17 significant digits.
std::string format_g17(double v);

// --- Scenario JSON: exact field names, complex values as {"re":..,"im":..} --
nlohmann::json scenario_to_json(const Scenario& s);
Scenario scenario_from_json(const nlohmann::json& j);

// --- CalibratedDetector JSON ------------------------------------------------
nlohmann::json calibrated_to_json(const CalibratedDetector& c);
CalibratedDetector calibrated_from_json(const nlohmann::json& j);

// --- GridSpec JSON ----------------------------------------------------------
nlohmann::json grid_to_json(const GridSpec& g);
GridSpec grid_from_json(const nlohmann::json& j);

// --- ObservationSet CSV: header "sensor,n,re,im", sensor-major rows ---------
std::string observations_to_csv(const ObservationSet& obs);
ObservationSet observations_from_csv(const std::string& text);  // throws on malformed input

// --- DetectionCurve CSV: header "abscissa,pd,stderr" ------------------------
std::string curve_to_csv(const DetectionCurve& curve);

// --- CostReport CSV ----------------------------------------------------------
/// Header "detector,N,M,n_alpha,flops,wall_ns_median,wall_ns_p90,repetitions".
std::string cost_reports_to_csv(const std::vector<CostReport>& reports);

// --- file helpers ------------------------------------------------------------
void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace freqdet
