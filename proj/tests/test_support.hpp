// shared helpers for the unit and acceptance suites
#pragma once
#include <cmath>
#include <numbers>
#include <random>

#include "freqdet/scenario.hpp"

namespace freqdet::testsupport {

inline Scenario tiny_scenario(std::int64_t m, std::int64_t n, double gamma, double omega0) {
  Scenario s;
  s.M = m;
  s.N = n;
  s.gamma = gamma;
  s.omega0 = omega0;
  s.amplitudes.assign(static_cast<std::size_t>(m), cdouble{1.0, 0.0});
  s.variances.assign(static_cast<std::size_t>(m), 1.0);
  return s;
}

inline Scenario random_scenario(std::mt19937_64& rng, std::int64_t max_m = 5,
                                std::int64_t max_n = 32, std::int64_t min_n = 2) {
  std::uniform_int_distribution<std::int64_t> m_dist(1, max_m);
  std::uniform_int_distribution<std::int64_t> n_dist(min_n, max_n);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Scenario s;
  s.M = m_dist(rng);
  s.N = n_dist(rng);
  s.gamma = 0.05 + 0.9 * u(rng);
  s.omega0 = 1.0 + 400.0 * u(rng);
  for (std::int64_t m = 0; m < s.M; ++m) {
    s.amplitudes.push_back(std::polar(0.3 + 1.7 * u(rng), 2.0 * std::numbers::pi * u(rng)));
    s.variances.push_back(0.25 + 3.75 * u(rng));
  }
  s.delta = (u(rng) - 0.5) * 0.2 * s.omega0;
  return s;
}

}  // namespace freqdet::testsupport
