#include "freqdet/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace freqdet {

std::string format_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

nlohmann::json complex_to_json(cdouble z) {
  return nlohmann::json{{"re", z.real()}, {"im", z.imag()}};
}

cdouble complex_from_json(const nlohmann::json& j) {
  return cdouble{j.at("re").get<double>(), j.at("im").get<double>()};
}

}  // namespace

nlohmann::json scenario_to_json(const Scenario& s) {
  nlohmann::json amps = nlohmann::json::array();
  for (const cdouble& a : s.amplitudes) amps.push_back(complex_to_json(a));
  return nlohmann::json{
      {"M", s.M},         {"N", s.N},
      {"gamma", s.gamma}, {"omega0", s.omega0},
      {"amplitudes", amps}, {"variances", s.variances},
      {"delta", s.delta},
  };
}

Scenario scenario_from_json(const nlohmann::json& j) {
  Scenario s;
  s.M = j.at("M").get<std::int64_t>();
  s.N = j.at("N").get<std::int64_t>();
  s.gamma = j.at("gamma").get<double>();
  s.omega0 = j.at("omega0").get<double>();
  for (const auto& a : j.at("amplitudes")) s.amplitudes.push_back(complex_from_json(a));
  s.variances = j.at("variances").get<std::vector<double>>();
  s.delta = j.at("delta").get<double>();
  s.validate();
  return s;
}

nlohmann::json calibrated_to_json(const CalibratedDetector& c) {
  return nlohmann::json{
      {"detector_id", detector_name(c.detector_id)},
      {"threshold", c.threshold},
      {"kappa", {{"kappa1", c.kappa.kappa1}, {"kappa2", c.kappa.kappa2}}},
      {"alpha", c.alpha},
      {"calibration_trials", c.calibration_trials},
      {"seed", c.seed},
      {"scenario", scenario_to_json(c.scenario)},
  };
}

CalibratedDetector calibrated_from_json(const nlohmann::json& j) {
  CalibratedDetector c;
  c.detector_id = detector_from_name(j.at("detector_id").get<std::string>());
  c.threshold = j.at("threshold").get<double>();
  c.kappa.kappa1 = j.at("kappa").at("kappa1").get<double>();
  c.kappa.kappa2 = j.at("kappa").at("kappa2").get<double>();
  c.alpha = j.at("alpha").get<double>();
  c.calibration_trials = j.at("calibration_trials").get<std::int64_t>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.scenario = scenario_from_json(j.at("scenario"));
  return c;
}

nlohmann::json grid_to_json(const GridSpec& g) {
  return nlohmann::json{{"n_alpha", g.n_alpha}, {"lo", g.lo}, {"hi", g.hi}};
}

GridSpec grid_from_json(const nlohmann::json& j) {
  GridSpec g;
  g.n_alpha = j.at("n_alpha").get<std::int64_t>();
  g.lo = j.at("lo").get<double>();
  g.hi = j.at("hi").get<double>();
  g.validate();
  return g;
}

std::string observations_to_csv(const ObservationSet& obs) {
  std::string out = "sensor,n,re,im\n";
  for (std::int64_t m = 0; m < obs.sensors; ++m) {
    for (std::int64_t n = 0; n < obs.samples; ++n) {
      const cdouble& z = obs.at(m, n);
      out += std::to_string(m);
      out += ',';
      out += std::to_string(n);
      out += ',';
      out += format_g17(z.real());
      out += ',';
      out += format_g17(z.imag());
      out += '\n';
    }
  }
  return out;
}

ObservationSet observations_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "sensor,n,re,im")
    throw std::runtime_error("observation CSV: expected header 'sensor,n,re,im'");

  struct Cell {
    std::int64_t m, n;
    cdouble z;
  };
  std::vector<Cell> cells;
  std::int64_t max_m = -1;
  std::int64_t max_n = -1;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    Cell c;
    double re = 0.0, im = 0.0;
    long long m = 0, n = 0;
    if (std::sscanf(line.c_str(), "%lld,%lld,%lf,%lf", &m, &n, &re, &im) != 4)
      throw std::runtime_error("observation CSV: malformed line " + std::to_string(line_no));
    if (m < 0 || n < 0)
      throw std::runtime_error("observation CSV: negative index at line " +
                               std::to_string(line_no));
    c.m = m;
    c.n = n;
    c.z = cdouble{re, im};
    cells.push_back(c);
    max_m = std::max<std::int64_t>(max_m, m);
    max_n = std::max<std::int64_t>(max_n, n);
  }
  if (cells.empty()) throw std::runtime_error("observation CSV: no data rows");

  ObservationSet obs(max_m + 1, max_n + 1);
  std::vector<bool> seen(obs.data.size(), false);
  for (const Cell& c : cells) {
    const auto idx = static_cast<std::size_t>(c.m * obs.samples + c.n);
    if (seen[idx]) throw std::runtime_error("observation CSV: duplicate (sensor,n) entry");
    seen[idx] = true;
    obs.at(c.m, c.n) = c.z;
  }
  for (bool s : seen) {
    if (!s) throw std::runtime_error("observation CSV: missing (sensor,n) entries");
  }
  return obs;
}

std::string curve_to_csv(const DetectionCurve& curve) {
  std::string out = "abscissa,pd,stderr\n";
  for (const CurvePoint& p : curve.points) {
    out += format_g17(p.abscissa);
    out += ',';
    out += format_g17(p.pd);
    out += ',';
    out += format_g17(p.pd_stderr);
    out += '\n';
  }
  return out;
}

std::string cost_reports_to_csv(const std::vector<CostReport>& reports) {
  std::string out = "detector,N,M,n_alpha,flops,wall_ns_median,wall_ns_p90,repetitions\n";
  for (const CostReport& r : reports) {
    out += detector_name(r.detector_id);
    out += ',';
    out += std::to_string(r.N);
    out += ',';
    out += std::to_string(r.M);
    out += ',';
    out += std::to_string(r.n_alpha);
    out += ',';
    out += std::to_string(r.flops_model);
    out += ',';
    out += std::to_string(r.wall_ns_median);
    out += ',';
    out += std::to_string(r.wall_ns_p90);
    out += ',';
    out += std::to_string(r.repetitions);
    out += '\n';
  }
  return out;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace freqdet
