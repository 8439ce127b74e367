#include "freqdet/scenario.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "freqdet/signal_model.hpp"

namespace freqdet {

void Scenario::validate() const {
  if (M < 1) throw std::invalid_argument("Scenario: M must be >= 1");
  if (N < 1) throw std::invalid_argument("Scenario: N must be >= 1");
  if (!(omega0 > 0.0)) throw std::invalid_argument("Scenario: omega0 must be > 0");
  if (gamma == 0.0 || !std::isfinite(gamma))
    throw std::invalid_argument("Scenario: gamma must be finite and nonzero");
  if (static_cast<std::int64_t>(amplitudes.size()) != M)
    throw std::invalid_argument("Scenario: amplitudes must have length M");
  if (static_cast<std::int64_t>(variances.size()) != M)
    throw std::invalid_argument("Scenario: variances must have length M");
  for (double v : variances) {
    if (!(v > 0.0)) throw std::invalid_argument("Scenario: variances must be strictly positive");
  }
  const double bound = std::abs(delta_bound());
  if (!(delta >= -bound && delta < bound))
    throw std::invalid_argument("Scenario: delta outside the unambiguous range [-omega0*pi/gamma, omega0*pi/gamma), delta=" +
                                std::to_string(delta));
}

Scenario Scenario::with_equal_snr_db(double snr_db) const {
  Scenario s = *this;
  for (std::int64_t m = 0; m < M; ++m) {
    s.variances[static_cast<std::size_t>(m)] =
        snr_to_variance(amplitudes[static_cast<std::size_t>(m)], snr_db);
  }
  return s;
}

Scenario default_scenario() {
  Scenario s;
  s.M = 6;
  s.N = 48;
  s.gamma = 2.0 * std::numbers::pi / 48.0;
  s.omega0 = 2.0 * std::numbers::pi * 60.0;
  s.amplitudes = {
      cdouble{1.0, 0.0},
      std::polar(1.0, std::numbers::pi / 3.0),
      std::polar(std::sqrt(3.0), -5.0 * std::numbers::pi / 6.0),
      cdouble{1.0, 0.0},
      std::polar(1.0, std::numbers::pi),
      cdouble{1.0, 0.0},
  };
  s.delta = 0.0;
  s.variances.assign(6, 0.0);
  Scenario leveled = s.with_equal_snr_db(0.0);  // sigma_m^2 = |A_m|^2
  return leveled;
}

void ObservationSet::validate_against(const Scenario& s) const {
  if (sensors != s.M || samples != s.N ||
      data.size() != static_cast<std::size_t>(s.M * s.N)) {
    throw std::invalid_argument("ObservationSet: dimensions do not match scenario (" +
                                std::to_string(sensors) + "x" + std::to_string(samples) +
                                " vs " + std::to_string(s.M) + "x" + std::to_string(s.N) + ")");
  }
}

}  // namespace freqdet
