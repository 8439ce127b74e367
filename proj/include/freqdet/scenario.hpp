// ============================================================================
// scenario.hpp -- model parameterization and observation container
// ============================================================================
#pragma once
#include <complex>
#include <cstdint>
#include <numbers>
#include <span>
#include <vector>

namespace freqdet {

using cdouble = std::complex<double>;

enum class Hypothesis { H0, H1 };

/// Full parameterization of the multi-sensor complex-sinusoid model: M sensors
/// observe N samples of a tone at the nominal frequency omega0 (under H0) or at
/// omega0+delta (under H1), with per-sensor complex amplitude and known noise
/// variance.
struct Scenario {
  std::int64_t M = 0;               ///< number of sensors (>= 1)
  std::int64_t N = 0;               ///< samples per sensor (>= 1)
  double gamma = 0.0;               ///< sampling angle [rad], != 0
  double omega0 = 0.0;              ///< nominal frequency [rad/s], > 0
  std::vector<cdouble> amplitudes;  ///< A_1..A_M
  std::vector<double> variances;    ///< sigma_1^2..sigma_M^2, all > 0
  double delta = 0.0;               ///< frequency deviation [rad/s]; 0 under H0

  /// Half-width of the unambiguous deviation range [-omega0*pi/gamma, ...).
  [[nodiscard]] double delta_bound() const { return omega0 * std::numbers::pi / gamma; }

  /// Throws std::invalid_argument when any field invariant is violated.
  void validate() const;

  [[nodiscard]] Scenario with_delta(double d) const {
    Scenario s = *this;
    s.delta = d;
    return s;
  }
  [[nodiscard]] Scenario with_samples(std::int64_t n) const {
    Scenario s = *this;
    s.N = n;
    return s;
  }
  /// Sets every sensor's variance to |A_m|^2 / 10^(snr_db/10).
  [[nodiscard]] Scenario with_equal_snr_db(double snr_db) const;
};

/// The six-sensor benchmark used throughout: M=6, N=48, gamma=2*pi/48,
/// omega0=2*pi*60, amplitudes [1, e^{j*pi/3}, sqrt(3)e^{-j*5pi/6}, 1, e^{j*pi}, 1],
/// equal per-sensor SNR of 0 dB, delta=0.
Scenario default_scenario();

/// M x N complex measurements, sensor-major.
struct ObservationSet {
  std::int64_t sensors = 0;
  std::int64_t samples = 0;
  std::vector<cdouble> data;

  ObservationSet() = default;
  ObservationSet(std::int64_t m, std::int64_t n)
      : sensors(m), samples(n), data(static_cast<std::size_t>(m * n)) {}

  [[nodiscard]] std::span<const cdouble> row(std::int64_t m) const {
    return {data.data() + m * samples, static_cast<std::size_t>(samples)};
  }
  [[nodiscard]] std::span<cdouble> row(std::int64_t m) {
    return {data.data() + m * samples, static_cast<std::size_t>(samples)};
  }
  [[nodiscard]] cdouble& at(std::int64_t m, std::int64_t n) { return data[m * samples + n]; }
  [[nodiscard]] const cdouble& at(std::int64_t m, std::int64_t n) const {
    return data[m * samples + n];
  }

  /// Throws std::invalid_argument unless dimensions match the scenario.
  void validate_against(const Scenario& s) const;
};

}  // namespace freqdet
