// ============================================================================
// freqdet -- experiment runner for the frequency-deviation detectors
//
// Subcommands: generate | detect | calibrate | curve | roc | bench.
// Each run loads a JSON experiment config, applies --set overrides, executes,
// and leaves CSV/JSON results plus a manifest.json in the output directory.
// Exit codes: 0 success, 2 configuration error, 3 runtime error.
// ============================================================================
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "freqdet/bench.hpp"
#include "freqdet/config.hpp"
#include "freqdet/io.hpp"
#include "freqdet/montecarlo.hpp"
#include "freqdet/rng.hpp"
#include "freqdet/signal_model.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CommonArgs {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_dir;        // overrides config.output_dir when set
  std::string seed_override;  // overrides config.master_seed when set
  std::string input;          // detect: observation CSV
  std::string calibration;    // detect: CalibratedDetector JSON
  int threads = 0;            // 0 = auto
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "experiment config JSON")->required();
  cmd->add_option("--set", args.overrides, "config override key=value (repeatable)");
  cmd->add_option("--out", args.out_dir, "output directory (overrides config)");
  cmd->add_option("--seed", args.seed_override, "master seed (overrides config)");
  cmd->add_option("--threads", args.threads, "worker threads, 0 = auto");
}

freqdet::ExperimentConfig load(const CommonArgs& args) {
  std::vector<std::string> overrides = args.overrides;
  if (!args.out_dir.empty()) overrides.push_back("output_dir=" + args.out_dir);
  if (!args.seed_override.empty()) overrides.push_back("master_seed=" + args.seed_override);
  if (!args.input.empty()) overrides.push_back("input=" + args.input);
  if (!args.calibration.empty()) overrides.push_back("calibration=" + args.calibration);
  return freqdet::load_config(args.config_path, overrides);
}

std::string alpha_tag(double alpha) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", alpha);
  return buf;
}

fs::path prepare_output_dir(const freqdet::ExperimentConfig& cfg) {
  fs::path dir(cfg.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory: " + dir.string());
  return dir;
}

void write_manifest(const fs::path& dir, const std::string& subcommand,
                    const freqdet::ExperimentConfig& cfg, const CommonArgs& args,
                    const std::vector<std::string>& outputs) {
  const freqdet::GridSpec grid = cfg.resolved_grid();
  json manifest{
      {"subcommand", subcommand},
      {"config", freqdet::config_to_json(cfg)},
      {"grid_resolved", freqdet::grid_to_json(grid)},
      {"overrides", args.overrides},
      {"threads", args.threads},
      {"master_seed", cfg.master_seed},
      {"outputs", outputs},
  };
  freqdet::write_text_file(dir / "manifest.json", manifest.dump(2) + "\n");
}

// ---------------------------------------------------------------------------

int run_generate(const CommonArgs& args) {
  const auto cfg = load(args);
  const fs::path dir = prepare_output_dir(cfg);

  const freqdet::Hypothesis hyp = cfg.hypothesis.value_or(
      cfg.scenario.delta != 0.0 ? freqdet::Hypothesis::H1 : freqdet::Hypothesis::H0);
  const freqdet::ObservationSet obs =
      freqdet::generate_observations(cfg.scenario, hyp, cfg.master_seed, cfg.noiseless);

  freqdet::write_text_file(dir / "observations.csv", freqdet::observations_to_csv(obs));
  write_manifest(dir, "generate", cfg, args, {"observations.csv"});
  std::cout << "wrote " << (dir / "observations.csv").string() << "\n";
  return 0;
}

int run_detect(const CommonArgs& args) {
  const auto cfg = load(args);
  if (cfg.input.empty())
    throw freqdet::ConfigError("detect: set config key 'input' or pass --input");
  const fs::path dir = prepare_output_dir(cfg);
  const freqdet::GridSpec grid = cfg.resolved_grid();

  const freqdet::ObservationSet obs =
      freqdet::observations_from_csv(freqdet::read_text_file(cfg.input));
  obs.validate_against(cfg.scenario);

  freqdet::CalibratedDetector cal;
  bool have_cal = false;
  if (!cfg.calibration.empty()) {
    cal = freqdet::calibrated_from_json(json::parse(freqdet::read_text_file(cfg.calibration)));
    have_cal = true;
  }

  for (freqdet::DetectorId id : cfg.detector_ids) {
    double threshold = 0.0;
    freqdet::KappaPair kappa;  // statistic with kappa1 = 0; threshold carries the level
    if (have_cal && cal.detector_id == id) {
      threshold = cal.threshold;
      kappa.kappa2 = cal.kappa.kappa2;
    }
    double statistic = 0.0;
    switch (id) {
      case freqdet::DetectorId::LRT:
        statistic = freqdet::lrt_statistic(obs, cfg.scenario, cfg.scenario.delta,
                                           cfg.scenario.amplitudes);
        break;
      case freqdet::DetectorId::GLRT:
        statistic = freqdet::glrt_statistic(obs, cfg.scenario, grid);
        break;
      case freqdet::DetectorId::LMPU:
        statistic = freqdet::lmpu_statistic(obs, cfg.scenario, cfg.scenario.amplitudes,
                                            freqdet::KappaPair{0.0, kappa.kappa2});
        break;
      case freqdet::DetectorId::GLMPU:
        statistic =
            freqdet::glmpu_statistic(obs, cfg.scenario, freqdet::KappaPair{0.0, kappa.kappa2});
        break;
      case freqdet::DetectorId::GLMP1S:
        statistic = freqdet::glmp_one_sided(obs, cfg.scenario);
        break;
    }
    const bool reject = statistic > threshold;
    std::cout << freqdet::detector_name(id) << " statistic=" << freqdet::format_g17(statistic)
              << " threshold=" << freqdet::format_g17(threshold)
              << " decision=" << (reject ? "reject" : "accept") << "\n";
  }
  write_manifest(dir, "detect", cfg, args, {});
  return 0;
}

int run_calibrate(const CommonArgs& args) {
  const auto cfg = load(args);
  if (cfg.alpha_list.empty())
    throw freqdet::ConfigError("calibrate: alpha_list must not be empty");
  const fs::path dir = prepare_output_dir(cfg);
  const freqdet::GridSpec grid = cfg.resolved_grid();

  std::vector<std::string> outputs;
  for (freqdet::DetectorId id : cfg.detector_ids) {
    for (double alpha : cfg.alpha_list) {
      const auto cal = freqdet::calibrate_threshold(id, cfg.scenario, alpha, cfg.trials,
                                                    cfg.master_seed, grid, args.threads);
      const std::string name =
          "calibration_" + freqdet::detector_name(id) + "_alpha" + alpha_tag(alpha) + ".json";
      freqdet::write_text_file(dir / name, freqdet::calibrated_to_json(cal).dump(2) + "\n");
      outputs.push_back(name);
    }
  }
  write_manifest(dir, "calibrate", cfg, args, outputs);
  std::cout << "wrote " << outputs.size() << " calibration file(s) to " << dir.string() << "\n";
  return 0;
}

int run_curve(const CommonArgs& args) {
  const auto cfg = load(args);
  if (cfg.alpha_list.empty()) throw freqdet::ConfigError("curve: alpha_list must not be empty");
  if (cfg.sweep_values.empty()) throw freqdet::ConfigError("curve: sweep.values must not be empty");
  if (cfg.sweep_axis == freqdet::CurveAxis::THRESHOLD)
    throw freqdet::ConfigError("curve: sweep.axis must be DELTA or SNR_DB");
  const fs::path dir = prepare_output_dir(cfg);
  const freqdet::GridSpec grid = cfg.resolved_grid();

  std::vector<std::string> outputs;
  for (freqdet::DetectorId id : cfg.detector_ids) {
    for (double alpha : cfg.alpha_list) {
      const auto curve =
          freqdet::detection_curve(id, cfg.scenario, cfg.sweep_axis, cfg.sweep_values, alpha,
                                   cfg.trials, cfg.master_seed, grid, args.threads);
      const std::string base =
          "curve_" + freqdet::detector_name(id) + "_alpha" + alpha_tag(alpha);
      freqdet::write_text_file(dir / (base + ".csv"), freqdet::curve_to_csv(curve));
      json sidecar{
          {"detector", freqdet::detector_name(id)},
          {"alpha", alpha},
          {"axis", freqdet::axis_name(curve.axis)},
          {"trials_per_point", curve.trials_per_point},
          {"master_seed", cfg.master_seed},
          {"scenario", freqdet::scenario_to_json(cfg.scenario)},
          {"grid", freqdet::grid_to_json(grid)},
      };
      freqdet::write_text_file(dir / (base + ".json"), sidecar.dump(2) + "\n");
      outputs.push_back(base + ".csv");
    }
  }
  write_manifest(dir, "curve", cfg, args, outputs);
  std::cout << "wrote " << outputs.size() << " curve(s) to " << dir.string() << "\n";
  return 0;
}

int run_roc(const CommonArgs& args) {
  const auto cfg = load(args);
  const fs::path dir = prepare_output_dir(cfg);
  const freqdet::GridSpec grid = cfg.resolved_grid();

  std::vector<std::string> outputs;
  for (freqdet::DetectorId id : cfg.detector_ids) {
    const auto curve =
        freqdet::roc_curve(id, cfg.scenario, cfg.trials, cfg.master_seed, grid, args.threads);
    const std::string base = "roc_" + freqdet::detector_name(id);
    freqdet::write_text_file(dir / (base + ".csv"), freqdet::curve_to_csv(curve));
    json sidecar{
        {"detector", freqdet::detector_name(id)},
        {"axis", "THRESHOLD"},
        {"trials", cfg.trials},
        {"master_seed", cfg.master_seed},
        {"scenario", freqdet::scenario_to_json(cfg.scenario)},
        {"grid", freqdet::grid_to_json(grid)},
    };
    freqdet::write_text_file(dir / (base + ".json"), sidecar.dump(2) + "\n");
    outputs.push_back(base + ".csv");
  }
  write_manifest(dir, "roc", cfg, args, outputs);
  std::cout << "wrote " << outputs.size() << " ROC curve(s) to " << dir.string() << "\n";
  return 0;
}

int run_bench(CommonArgs args) {
  args.threads = 1;  // timing validity: bench is single-threaded by contract
  const auto cfg = load(args);
  const fs::path dir = prepare_output_dir(cfg);
  const freqdet::GridSpec grid = cfg.resolved_grid();

  std::vector<std::int64_t> n_values;
  for (double v : cfg.sweep_values) n_values.push_back(static_cast<std::int64_t>(v));
  if (n_values.empty()) n_values = {48, 480, 4800};

  const auto reports = freqdet::runtime_sweep(cfg.detector_ids, n_values, cfg.scenario, grid,
                                              cfg.repetitions, cfg.master_seed);
  freqdet::write_text_file(dir / "bench.csv", freqdet::cost_reports_to_csv(reports));
  write_manifest(dir, "bench", cfg, args, {"bench.csv"});
  std::cout << "wrote " << (dir / "bench.csv").string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"frequency-deviation detector experiments"};
  app.require_subcommand(1);

  CommonArgs args;
  CLI::App* generate = app.add_subcommand("generate", "synthesize an observation CSV");
  CLI::App* detect = app.add_subcommand("detect", "evaluate statistics on an observation CSV");
  CLI::App* calibrate = app.add_subcommand("calibrate", "calibrate detector thresholds");
  CLI::App* curve = app.add_subcommand("curve", "detection-probability sweeps");
  CLI::App* roc = app.add_subcommand("roc", "empirical ROC curves");
  CLI::App* bench = app.add_subcommand("bench", "flop model + wall-clock benchmark");
  for (CLI::App* cmd : {generate, detect, calibrate, curve, roc, bench}) add_common(cmd, args);
  detect->add_option("--input", args.input, "observation CSV to evaluate");
  detect->add_option("--calibration", args.calibration, "CalibratedDetector JSON for thresholds");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (generate->parsed()) return run_generate(args);
    if (detect->parsed()) return run_detect(args);
    if (calibrate->parsed()) return run_calibrate(args);
    if (curve->parsed()) return run_curve(args);
    if (roc->parsed()) return run_roc(args);
    if (bench->parsed()) return run_bench(args);
  } catch (const freqdet::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
