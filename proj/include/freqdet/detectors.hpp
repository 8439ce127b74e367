// ============================================================================
// detectors.hpp -- test statistics and estimators
//
// Sign and scale conventions, used consistently everywhere:
//
//   * score_first / score_second are the exact first and second derivatives of
//     loglik() with respect to delta at delta = 0.  Differentiating the
//     squared-residual form -sum ||x_m - A_m s||^2/sigma_m^2 brings a factor 2
//     out of the 2*Re{A_m x_m^H s} cross term, hence the coefficients
//     2*gamma/(omega0*sigma_m^2) and 2*gamma^2/(omega0^2*sigma_m^2).
//   * lmpu/glmpu are  second + first^2 - kappa1 + kappa2 * (negated first
//     score);  the decision rule elsewhere rejects H0 when the statistic is
//     strictly greater than 0 (or, equivalently, compares the kappa1=0 value
//     against a calibrated threshold).
// ============================================================================
#pragma once
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "freqdet/scenario.hpp"

namespace freqdet {

/// Uniform half-open search grid for the ML frequency search: point k is
/// lo + k*(hi-lo)/n_alpha for k = 0..n_alpha-1.
struct GridSpec {
  std::int64_t n_alpha = 1;
  double lo = 0.0;
  double hi = 0.0;

  void validate() const;  // throws std::invalid_argument
  [[nodiscard]] std::vector<double> points() const;
};

/// Grid over the full unambiguous range [-omega0*pi/gamma, omega0*pi/gamma).
GridSpec default_grid(const Scenario& scenario, std::int64_t n_alpha);

/// Threshold coefficients of the locally-optimal statistics.  Nonnegative in
/// the underlying theory; calibration may store an empirical threshold here.
struct KappaPair {
  double kappa1 = 0.0;
  double kappa2 = 0.0;
};

enum class DetectorId { LRT, GLRT, LMPU, GLMPU, GLMP1S };

std::string detector_name(DetectorId id);
DetectorId detector_from_name(std::string_view name);  // throws on unknown name

// ---------------------------------------------------------------------------
// statistics and estimators
// ---------------------------------------------------------------------------

/// Clairvoyant likelihood-ratio statistic: the tone-matched correlation at
/// omega0+delta minus the one at omega0, both with the true amplitudes.
double lrt_statistic(const ObservationSet& obs, const Scenario& scenario, double delta,
                     std::span<const cdouble> amplitudes);

/// Grid-search ML estimate of the frequency deviation: the grid point
/// maximizing (1/N) sum_m |s^H(omega0+alpha) x_m|^2 / sigma_m^2.  Every grid
/// point is evaluated (no refinement); ties prefer the smallest |alpha| and
/// then the negative sign.
double ml_frequency(const ObservationSet& obs, const Scenario& scenario, const GridSpec& grid);

/// Per-sensor amplitude ML estimate under H0:  (1/N) s^H(omega0) x_m.
std::vector<cdouble> amplitude_ml_null(const ObservationSet& obs, const Scenario& scenario);

/// Per-sensor amplitude ML estimate at a given deviation estimate.
std::vector<cdouble> amplitude_ml_alt(const ObservationSet& obs, const Scenario& scenario,
                                      double delta_hat);

/// GLRT: (1/N) sum_m (|x_m^H s(omega0+delta_hat)|^2 - |x_m^H s(omega0)|^2)
/// / sigma_m^2 with delta_hat from the grid search.  alpha = 0 is inserted
/// into the search if the grid misses it, which makes the statistic >= 0.
double glrt_statistic(const ObservationSet& obs, const Scenario& scenario, const GridSpec& grid);

/// d loglik / d delta at delta = 0:
///   -sum_m (2*gamma/(omega0*sigma_m^2)) * Im{A_m x_m^H D_N s(omega0)}.
double score_first(const ObservationSet& obs, const Scenario& scenario,
                   std::span<const cdouble> amplitudes);

/// d^2 loglik / d delta^2 at delta = 0:
///   -sum_m (2*gamma^2/(omega0^2*sigma_m^2)) * Re{A_m x_m^H D_N D_N s(omega0)}.
double score_second(const ObservationSet& obs, const Scenario& scenario,
                    std::span<const cdouble> amplitudes);

/// Locally most powerful unbiased statistic with known amplitudes:
///   score_second + score_first^2 - kappa1 - kappa2 * score_first.
double lmpu_statistic(const ObservationSet& obs, const Scenario& scenario,
                      std::span<const cdouble> amplitudes, const KappaPair& kappa);

/// Amplitude-free version: the same statistic with the H0 amplitude ML
/// estimates substituted, expanded into quadratic forms of x so no estimation
/// step is visible:
///   -sum_m (2*gamma^2/(N*omega0^2*sigma_m^2)) Re{x_m^H D D s s^H x_m}
///   + (sum_m (2*gamma/(N*omega0*sigma_m^2)) Im{x_m^H D s s^H x_m})^2
///   - kappa1 + kappa2 * sum_m (2*gamma/(N*omega0*sigma_m^2)) Im{x_m^H D s s^H x_m}.
double glmpu_statistic(const ObservationSet& obs, const Scenario& scenario,
                       const KappaPair& kappa);

/// One-sided local statistic: the first score with the H0 amplitude ML
/// estimates substituted (again as a direct quadratic form of x).
double glmp_one_sided(const ObservationSet& obs, const Scenario& scenario);

// ---------------------------------------------------------------------------
// prepared evaluator
// ---------------------------------------------------------------------------

/// Precomputes everything a detector needs that does not depend on the data
/// (steering vectors, ramp-weighted conjugate steering, the GLRT grid table)
/// so Monte Carlo loops and benchmarks pay only the per-observation cost.
/// Evaluation is bit-identical to the standalone functions above.
class StatisticEvaluator {
 public:
  /// kappa2 enters LMPU/GLMPU raw statistics; kappa1 is always 0 here (the
  /// Monte Carlo layer compares against an explicit threshold instead).
  StatisticEvaluator(DetectorId id, Scenario scenario, GridSpec grid, double kappa2 = 0.0);

  /// The raw statistic (kappa1 = 0) for one observation set.
  [[nodiscard]] double raw(const ObservationSet& obs) const;

  /// For LMPU/GLMPU: {quadratic part, linear part} with
  /// raw = quadratic + kappa2 * linear.  Lets kappa2 scans reuse one pass.
  [[nodiscard]] std::pair<double, double> components(const ObservationSet& obs) const;

  [[nodiscard]] DetectorId id() const { return id_; }
  [[nodiscard]] const Scenario& scenario() const { return scenario_; }
  [[nodiscard]] const GridSpec& grid() const { return grid_; }

 private:
  DetectorId id_;
  Scenario scenario_;
  GridSpec grid_;
  double kappa2_ = 0.0;

  // grid search state (GLRT): points with alpha=0 inserted, and either a
  // precomputed table of conjugated steering rows or streaming re-generation
  // when the table would exceed the memory budget.
  std::vector<double> search_points_;
  std::vector<cdouble> steering_table_;  // search_points_.size() x N when tabulated
  bool tabulated_ = false;
  std::size_t zero_index_ = 0;

  // conjugated s(omega0) and its ramp-weighted variants (all detectors but GLRT)
  std::vector<cdouble> conj_s0_;    // conj(s_n)
  std::vector<cdouble> conj_s0_n_;  // n * conj(s_n)
  std::vector<cdouble> conj_s0_n2_; // n^2 * conj(s_n)

  // LRT: s(omega0+delta), unconjugated
  std::vector<cdouble> s_delta_;

  [[nodiscard]] double glrt_eval(const ObservationSet& obs) const;
};

/// Entry budget above which GLRT grid tables fall back to streaming rows
/// (2^22 complex entries, 64 MB).
inline constexpr std::int64_t kSteeringTableBudget = std::int64_t{1} << 22;

}  // namespace freqdet
