#include "freqdet/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <map>
#include <stdexcept>

#include "freqdet/parallel.hpp"
#include "freqdet/rng.hpp"
#include "freqdet/signal_model.hpp"

namespace freqdet {

namespace {

// one shared trial stream: calling estimate_pd with a calibration's own run
// seed regenerates exactly the calibration datasets (delta=0 H1 data is
// bit-identical to H0 data).  Disjointness between calibration and evaluation
// is arranged by the curve drivers, which mix distinct stream tags into the
// run seeds they hand down.
constexpr std::uint64_t kTrialStream = 0x7121;

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("alpha must lie strictly inside (0,1)");
}

std::int64_t count_above(const std::vector<double>& values, double threshold) {
  std::int64_t c = 0;
  for (double v : values) {
    if (v > threshold) ++c;
  }
  return c;
}

std::pair<double, double> rate_and_stderr(std::int64_t hits, std::int64_t trials) {
  const double p = static_cast<double>(hits) / static_cast<double>(trials);
  return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(trials))};
}

void check_scenarios_compatible(const Scenario& cal, const Scenario& eval) {
  const bool ok = cal.M == eval.M && cal.N == eval.N && cal.gamma == eval.gamma &&
                  cal.omega0 == eval.omega0 && cal.variances == eval.variances;
  if (!ok)
    throw std::invalid_argument(
        "estimate_pd: scenario differs from the calibration scenario in M, N, gamma, "
        "omega0 or variances");
}

}  // namespace

std::string axis_name(CurveAxis axis) {
  switch (axis) {
    case CurveAxis::DELTA: return "DELTA";
    case CurveAxis::SNR_DB: return "SNR_DB";
    case CurveAxis::THRESHOLD: return "THRESHOLD";
  }
  throw std::invalid_argument("axis_name: bad enum value");
}

CurveAxis axis_from_name(std::string_view name) {
  if (name == "DELTA") return CurveAxis::DELTA;
  if (name == "SNR_DB") return CurveAxis::SNR_DB;
  if (name == "THRESHOLD") return CurveAxis::THRESHOLD;
  throw std::invalid_argument("unknown curve axis: " + std::string(name));
}

std::vector<double> simulate_statistics(std::int64_t trials, std::uint64_t run_seed,
                                        std::uint64_t stream, int threads,
                                        const StatisticSampler& sampler) {
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  std::vector<double> stats(static_cast<std::size_t>(trials));
  parallel_for(trials, threads, [&](std::int64_t t) {
    stats[static_cast<std::size_t>(t)] =
        sampler(t, seed_combine(run_seed, stream, static_cast<std::uint64_t>(t)));
  });
  return stats;
}

double quantile_threshold(std::vector<double> stats, double alpha) {
  check_alpha(alpha);
  if (stats.empty()) throw std::invalid_argument("quantile_threshold: empty sample");
  const auto n = static_cast<std::int64_t>(stats.size());
  // ceil((1-alpha)*n)-th order statistic, 1-indexed.  The tiny downward nudge
  // keeps binary representation drift in (1-alpha)*n from bumping a boundary
  // case (alpha*n integral) up one order statistic.
  auto k = static_cast<std::int64_t>(
      std::ceil((1.0 - alpha) * static_cast<double>(n) - 1e-9));
  k = std::clamp<std::int64_t>(k, 1, n);
  std::nth_element(stats.begin(), stats.begin() + (k - 1), stats.end());
  return stats[static_cast<std::size_t>(k - 1)];
}

std::pair<double, double> rejection_rate(std::int64_t trials, std::uint64_t run_seed,
                                         std::uint64_t stream, int threads, double threshold,
                                         const StatisticSampler& sampler) {
  const std::vector<double> stats =
      simulate_statistics(trials, run_seed, stream, threads, sampler);
  return rate_and_stderr(count_above(stats, threshold), trials);
}

CalibratedDetector calibrate_threshold(DetectorId id, const Scenario& scenario, double alpha,
                                       std::int64_t trials, std::uint64_t seed,
                                       const GridSpec& grid, int threads) {
  scenario.validate();
  check_alpha(alpha);
  if (trials < 1) throw std::invalid_argument("calibrate_threshold: trials must be >= 1");
  if (static_cast<double>(trials) * alpha < 1.0) {
    std::cerr << "warning: calibrate_threshold: " << trials
              << " trials cannot resolve alpha=" << alpha << " (trials < 1/alpha)\n";
  }

  const StatisticEvaluator eval(id, scenario, grid, 0.0);
  const std::vector<double> stats = simulate_statistics(
      trials, seed, kTrialStream, threads, [&](std::int64_t, std::uint64_t trial_seed) {
        thread_local ObservationSet obs;
        generate_observations_into(obs, scenario, Hypothesis::H0, trial_seed);
        return eval.raw(obs);
      });

  CalibratedDetector cal;
  cal.detector_id = id;
  cal.threshold = quantile_threshold(stats, alpha);
  if (id == DetectorId::LMPU || id == DetectorId::GLMPU)
    cal.kappa = KappaPair{cal.threshold, 0.0};
  cal.alpha = alpha;
  cal.calibration_trials = trials;
  cal.seed = seed;
  cal.scenario = scenario;
  return cal;
}

std::pair<double, double> estimate_pd(const CalibratedDetector& cal, const Scenario& scenario,
                                      std::int64_t trials, std::uint64_t seed,
                                      const GridSpec& grid, int threads) {
  scenario.validate();
  check_scenarios_compatible(cal.scenario, scenario);

  const StatisticEvaluator eval(cal.detector_id, scenario, grid, cal.kappa.kappa2);
  return rejection_rate(trials, seed, kTrialStream, threads, cal.threshold,
                        [&](std::int64_t, std::uint64_t trial_seed) {
                          thread_local ObservationSet obs;
                          generate_observations_into(obs, scenario, Hypothesis::H1, trial_seed);
                          return eval.raw(obs);
                        });
}

DetectionCurve detection_curve(DetectorId id, const Scenario& base, CurveAxis axis,
                               std::span<const double> values, double alpha,
                               std::int64_t trials, std::uint64_t master_seed,
                               const GridSpec& grid, int threads) {
  base.validate();
  check_alpha(alpha);
  if (axis == CurveAxis::THRESHOLD)
    throw std::invalid_argument("detection_curve: THRESHOLD axis belongs to roc_curve");
  if (values.empty()) throw std::invalid_argument("detection_curve: empty sweep");
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (!(values[i] > values[i - 1]))
      throw std::invalid_argument("detection_curve: sweep values must be strictly increasing");
  }

  DetectionCurve curve;
  curve.axis = axis;
  curve.alpha = alpha;
  curve.trials_per_point = trials;
  curve.points.resize(values.size());

  // One calibration per curve, except where the H0 statistic itself changes
  // from point to point: every detector on SNR sweeps (variances enter the
  // statistic) and the clairvoyant LRT on delta sweeps (the tested deviation
  // is a statistic parameter).
  const bool per_point_cal = axis == CurveAxis::SNR_DB || id == DetectorId::LRT;

  CalibratedDetector shared_cal;
  if (!per_point_cal) {
    shared_cal = calibrate_threshold(id, base, alpha, trials,
                                     seed_combine(master_seed, kCalibrationStream), grid, threads);
  }

  for (std::size_t i = 0; i < values.size(); ++i) {
    Scenario point_scenario =
        axis == CurveAxis::DELTA ? base.with_delta(values[i]) : base.with_equal_snr_db(values[i]);

    const CalibratedDetector& cal =
        per_point_cal
            ? (shared_cal = calibrate_threshold(
                   id, point_scenario, alpha, trials,
                   seed_combine(master_seed, kCalibrationStream, static_cast<std::uint64_t>(i)),
                   grid, threads))
            : shared_cal;

    const auto [pd, se] = estimate_pd(
        cal, point_scenario, trials,
        seed_combine(master_seed, kEvaluationStream, static_cast<std::uint64_t>(i)), grid,
        threads);
    curve.points[i] = CurvePoint{values[i], pd, se};
  }
  return curve;
}

DetectionCurve roc_from_samples(std::vector<double> h0_stats, std::vector<double> h1_stats) {
  if (h0_stats.empty() || h0_stats.size() != h1_stats.size())
    throw std::invalid_argument("roc_from_samples: need equal nonempty H0/H1 samples");
  std::sort(h0_stats.begin(), h0_stats.end());
  std::sort(h1_stats.begin(), h1_stats.end());

  const auto n = static_cast<double>(h0_stats.size());
  auto frac_above = [n](const std::vector<double>& sorted, double t) {
    return static_cast<double>(sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), t)) /
           n;
  };

  // Thresholds descend through the unique H0 order statistics, so Pfa
  // ascends.  Equal-Pfa steps keep the largest Pd; thresholds at or above the
  // largest H0 statistic collapse into the (0,0) endpoint.
  std::map<double, double> by_pfa;
  for (std::size_t i = h0_stats.size(); i-- > 0;) {
    if (i + 1 < h0_stats.size() && h0_stats[i] == h0_stats[i + 1]) continue;
    const double pfa = frac_above(h0_stats, h0_stats[i]);
    const double pd = frac_above(h1_stats, h0_stats[i]);
    auto [it, inserted] = by_pfa.try_emplace(pfa, pd);
    if (!inserted) it->second = std::max(it->second, pd);
  }

  DetectionCurve curve;
  curve.axis = CurveAxis::THRESHOLD;
  curve.alpha = 0.0;
  curve.trials_per_point = static_cast<std::int64_t>(h0_stats.size());
  curve.points.push_back(CurvePoint{0.0, 0.0, 0.0});
  for (const auto& [pfa, pd] : by_pfa) {
    if (pfa <= 0.0 || pfa >= 1.0) continue;
    curve.points.push_back(CurvePoint{pfa, pd, std::sqrt(pd * (1.0 - pd) / n)});
  }
  curve.points.push_back(CurvePoint{1.0, 1.0, 0.0});
  return curve;
}

DetectionCurve roc_curve(DetectorId id, const Scenario& scenario, std::int64_t trials,
                         std::uint64_t seed, const GridSpec& grid, int threads) {
  scenario.validate();
  if (scenario.delta == 0.0)
    throw std::invalid_argument("roc_curve: scenario.delta must be nonzero");

  const StatisticEvaluator eval(id, scenario, grid, 0.0);
  auto make_sampler = [&](Hypothesis hyp) {
    return [&eval, &scenario, hyp](std::int64_t, std::uint64_t trial_seed) {
      thread_local ObservationSet obs;
      generate_observations_into(obs, scenario, hyp, trial_seed);
      return eval.raw(obs);
    };
  };
  std::vector<double> h0 =
      simulate_statistics(trials, seed_combine(seed, kCalibrationStream), kTrialStream, threads,
                          make_sampler(Hypothesis::H0));
  std::vector<double> h1 =
      simulate_statistics(trials, seed_combine(seed, kEvaluationStream), kTrialStream, threads,
                          make_sampler(Hypothesis::H1));
  return roc_from_samples(std::move(h0), std::move(h1));
}

UnbiasednessReport verify_unbiasedness(const CalibratedDetector& cal, const Scenario& base,
                                       double delta_radius, std::int64_t n_points,
                                       std::int64_t trials, std::uint64_t seed,
                                       double tolerance, const GridSpec& grid, int threads) {
  base.validate();
  if (!(delta_radius > 0.0))
    throw std::invalid_argument("verify_unbiasedness: delta_radius must be > 0");
  if (n_points < 2 || n_points % 2 != 0)
    throw std::invalid_argument("verify_unbiasedness: n_points must be even and >= 2");

  const std::int64_t half = n_points / 2;
  std::vector<double> deltas;
  deltas.reserve(static_cast<std::size_t>(n_points));
  for (std::int64_t k = half; k >= 1; --k)
    deltas.push_back(-delta_radius * static_cast<double>(k) / static_cast<double>(half + 1));
  for (std::int64_t k = 1; k <= half; ++k)
    deltas.push_back(delta_radius * static_cast<double>(k) / static_cast<double>(half + 1));

  UnbiasednessReport report;
  report.delta_radius = delta_radius;
  report.grid = deltas;
  report.tolerance =
      tolerance > 0.0
          ? tolerance
          : 3.0 * std::sqrt(cal.alpha * (1.0 - cal.alpha) / static_cast<double>(trials));
  report.passed = true;
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    const auto [pd, se] = estimate_pd(
        cal, base.with_delta(deltas[i]), trials,
        seed_combine(seed, kEvaluationStream, static_cast<std::uint64_t>(i)), grid, threads);
    (void)se;
    report.pd_values.push_back(pd);
    if (pd < cal.alpha - report.tolerance) report.passed = false;
  }
  return report;
}

KappaPair search_kappa2(DetectorId id, const Scenario& base, double alpha, double delta_radius,
                        std::int64_t trials, std::uint64_t seed, const GridSpec& grid,
                        std::span<const double> kappa2_scan, int threads) {
  if (id != DetectorId::LMPU && id != DetectorId::GLMPU)
    throw std::invalid_argument("search_kappa2: only LMPU and GLMPU carry kappa coefficients");
  base.validate();
  check_alpha(alpha);
  if (!(delta_radius > 0.0))
    throw std::invalid_argument("search_kappa2: delta_radius must be > 0");

  const StatisticEvaluator eval(id, base, grid, 0.0);
  auto components_of = [&](const Scenario& scenario, Hypothesis hyp, std::uint64_t run_seed) {
    std::vector<std::pair<double, double>> parts(static_cast<std::size_t>(trials));
    parallel_for(trials, threads, [&](std::int64_t t) {
      thread_local ObservationSet obs;
      generate_observations_into(obs, scenario, hyp,
                                 seed_combine(run_seed, kTrialStream,
                                              static_cast<std::uint64_t>(t)));
      parts[static_cast<std::size_t>(t)] = eval.components(obs);
    });
    return parts;
  };

  const auto h0 = components_of(base, Hypothesis::H0, seed_combine(seed, kCalibrationStream));

  // fixed six-point unbiasedness grid, +/- delta_radius * {1,2,3}/4
  constexpr std::int64_t kHalf = 3;
  std::vector<std::vector<std::pair<double, double>>> h1;
  for (std::int64_t k = -kHalf; k <= kHalf; ++k) {
    if (k == 0) continue;
    const double d = delta_radius * static_cast<double>(k) / static_cast<double>(kHalf + 1);
    h1.push_back(components_of(base.with_delta(d), Hypothesis::H1,
                               seed_combine(seed, kEvaluationStream,
                                            static_cast<std::uint64_t>(h1.size()))));
  }

  std::vector<double> scan(kappa2_scan.begin(), kappa2_scan.end());
  for (double v : scan) {
    if (!(v >= 0.0)) throw std::invalid_argument("search_kappa2: kappa2 values must be >= 0");
  }
  if (scan.empty()) {
    // pilot-scaled default: kappa2 comparable to std(quad)/std(lin) under H0
    double mq = 0.0, ml = 0.0;
    for (const auto& [q, l] : h0) {
      mq += q;
      ml += l;
    }
    mq /= static_cast<double>(trials);
    ml /= static_cast<double>(trials);
    double vq = 0.0, vl = 0.0;
    for (const auto& [q, l] : h0) {
      vq += (q - mq) * (q - mq);
      vl += (l - ml) * (l - ml);
    }
    const double sq = std::sqrt(vq / static_cast<double>(trials));
    const double sl = std::sqrt(vl / static_cast<double>(trials));
    scan = {0.0};
    if (sl > 0.0 && sq > 0.0) {
      const double r = sq / sl;
      scan.insert(scan.end(), {r / 4.0, r / 2.0, r, 2.0 * r, 4.0 * r});
    }
  }
  if (std::find(scan.begin(), scan.end(), 0.0) == scan.end()) scan.push_back(0.0);
  std::sort(scan.begin(), scan.end());

  KappaPair best;
  double best_min_pd = -1.0;
  std::vector<double> h0_stats(static_cast<std::size_t>(trials));
  for (double k2 : scan) {
    for (std::size_t t = 0; t < h0.size(); ++t)
      h0_stats[t] = h0[t].first + k2 * h0[t].second;
    const double k1 = quantile_threshold(h0_stats, alpha);

    double min_pd = 1.0;
    for (const auto& point : h1) {
      std::int64_t hits = 0;
      for (const auto& [q, l] : point) {
        if (q + k2 * l > k1) ++hits;
      }
      min_pd = std::min(min_pd, static_cast<double>(hits) / static_cast<double>(trials));
    }
    if (min_pd > best_min_pd) {  // scan ascends, so ties keep the smaller kappa2
      best_min_pd = min_pd;
      best = KappaPair{k1, k2};
    }
  }
  return best;
}

}  // namespace freqdet
