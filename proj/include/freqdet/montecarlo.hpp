// ============================================================================
// montecarlo.hpp -- threshold calibration, detection-probability estimation,
// curve sweeps, ROC curves, and the empirical unbiasedness check.
//
// Determinism contract: every trial draws its dataset from
// seed_combine(run_seed, stream, trial_index), statistics are written into
// per-trial slots, and aggregation is counting, so results are bit-identical
// for any thread count.  Calibration and evaluation use disjoint streams.
// ============================================================================
#pragma once
#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "freqdet/detectors.hpp"
#include "freqdet/scenario.hpp"

namespace freqdet {

enum class CurveAxis { DELTA, SNR_DB, THRESHOLD };

std::string axis_name(CurveAxis axis);
CurveAxis axis_from_name(std::string_view name);

/// A detector identity plus the constants fixed by calibration.  The decision
/// rule is: reject H0 when the raw statistic (kappa1 = 0) exceeds `threshold`
/// strictly.  For LMPU/GLMPU the pair view kappa = {threshold, kappa2} is the
/// same rule written as "statistic > 0".
struct CalibratedDetector {
  DetectorId detector_id = DetectorId::GLMPU;
  double threshold = 0.0;
  KappaPair kappa;
  double alpha = 0.0;
  std::int64_t calibration_trials = 0;
  std::uint64_t seed = 0;
  /// Calibration scenario, kept so later evaluations can reject incompatible
  /// inputs.  Its delta is the clairvoyant LRT's statistic parameter.
  Scenario scenario;
};

struct CurvePoint {
  double abscissa = 0.0;
  double pd = 0.0;
  double pd_stderr = 0.0;
};

struct DetectionCurve {
  CurveAxis axis = CurveAxis::DELTA;
  std::vector<CurvePoint> points;
  double alpha = 0.0;
  std::int64_t trials_per_point = 0;
};

struct UnbiasednessReport {
  double delta_radius = 0.0;
  std::vector<double> grid;       ///< tested deviations, symmetric, excludes 0
  std::vector<double> pd_values;  ///< one per grid entry
  bool passed = false;
  double tolerance = 0.0;         ///< pd >= alpha - tolerance required everywhere
};

// ---------------------------------------------------------------------------
// generic core (statistic samplers), used by the public operations and by
// tests that inject stub detectors
// ---------------------------------------------------------------------------

/// sampler(trial_index, trial_seed) -> statistic value for that trial.
using StatisticSampler = std::function<double(std::int64_t, std::uint64_t)>;

/// Runs `trials` samplers with seeds seed_combine(run_seed, stream, t) and
/// returns the statistics in trial order (thread-count independent).
std::vector<double> simulate_statistics(std::int64_t trials, std::uint64_t run_seed,
                                        std::uint64_t stream, int threads,
                                        const StatisticSampler& sampler);

/// The ceil((1-alpha)*n)-th smallest value (1-indexed order statistic).
/// Rejecting on strict ">" then gives an empirical false-alarm rate <= alpha,
/// with equality when alpha*n is integral and the sample has no ties.
double quantile_threshold(std::vector<double> stats, double alpha);

/// Fraction of trials with statistic > threshold, plus the binomial stderr
/// sqrt(p*(1-p)/trials).
std::pair<double, double> rejection_rate(std::int64_t trials, std::uint64_t run_seed,
                                         std::uint64_t stream, int threads, double threshold,
                                         const StatisticSampler& sampler);

/// Assembles the empirical ROC staircase from raw statistic samples:
/// thresholds sweep the unique H0 order statistics, equal-Pfa steps keep the
/// largest Pd, and the (0,0) / (1,1) endpoints are attached.
DetectionCurve roc_from_samples(std::vector<double> h0_stats, std::vector<double> h1_stats);

// ---------------------------------------------------------------------------
// public operations
// ---------------------------------------------------------------------------

/// Simulates `trials` H0 datasets from the scenario, computes the detector's
/// raw statistic (kappa1 = 0, kappa2 = 0), and stores the empirical
/// (1-alpha)-quantile threshold.  The scenario's delta is not used to generate
/// data (H0) but parameterizes the clairvoyant LRT statistic.  Emits a warning
/// to stderr when trials < 1/alpha.
CalibratedDetector calibrate_threshold(DetectorId id, const Scenario& scenario, double alpha,
                                       std::int64_t trials, std::uint64_t seed,
                                       const GridSpec& grid, int threads = 1);

/// Empirical detection probability of a calibrated detector on H1 data from
/// `scenario` (which must match the calibration scenario except for delta).
std::pair<double, double> estimate_pd(const CalibratedDetector& cal, const Scenario& scenario,
                                      std::int64_t trials, std::uint64_t seed,
                                      const GridSpec& grid, int threads = 1);

/// Sweeps detection probability along DELTA or SNR_DB.  SNR sweeps recalibrate
/// at every point (the H0 statistic depends on the variances); DELTA sweeps
/// calibrate once, except for the LRT whose statistic is parameterized by the
/// tested deviation and is therefore recalibrated per point.
DetectionCurve detection_curve(DetectorId id, const Scenario& base, CurveAxis axis,
                               std::span<const double> values, double alpha,
                               std::int64_t trials, std::uint64_t master_seed,
                               const GridSpec& grid, int threads = 1);

/// Empirical ROC at the scenario's (nonzero) delta: thresholds sweep the
/// pooled H0 order statistics; points are (Pfa, Pd) with (0,0) and (1,1)
/// endpoints attached.
DetectionCurve roc_curve(DetectorId id, const Scenario& scenario, std::int64_t trials,
                         std::uint64_t seed, const GridSpec& grid, int threads = 1);

/// Checks pd >= alpha - tolerance on a symmetric deviation grid inside
/// (-delta_radius, delta_radius) excluding 0.  n_points must be even; the grid
/// is +/- delta_radius*k/(n_points/2+1).  tolerance <= 0 selects
/// 3*sqrt(alpha*(1-alpha)/trials).
UnbiasednessReport verify_unbiasedness(const CalibratedDetector& cal, const Scenario& base,
                                       double delta_radius, std::int64_t n_points,
                                       std::int64_t trials, std::uint64_t seed,
                                       double tolerance, const GridSpec& grid,
                                       int threads = 1);

/// Experimental search for a nonzero kappa2 (LMPU/GLMPU only): scans the given
/// nonnegative kappa2 values (a default pilot-scaled grid including 0 when
/// empty), recalibrates kappa1 to size alpha for each, and returns the pair
/// maximizing the minimum pd over the unbiasedness grid, preferring smaller
/// kappa2 on ties.
KappaPair search_kappa2(DetectorId id, const Scenario& base, double alpha, double delta_radius,
                        std::int64_t trials, std::uint64_t seed, const GridSpec& grid,
                        std::span<const double> kappa2_scan = {}, int threads = 1);

}  // namespace freqdet
