#include "freqdet/signal_model.hpp"

#include <cmath>
#include <stdexcept>

#include "freqdet/rng.hpp"

namespace freqdet {

void fill_steering(std::vector<cdouble>& out, double omega, const Scenario& scenario) {
  const double phase_step = scenario.gamma * (omega / scenario.omega0);
  out.resize(static_cast<std::size_t>(scenario.N));
  for (std::int64_t n = 0; n < scenario.N; ++n) {
    // per-entry angle (not a running product) to keep entries on the unit circle
    out[static_cast<std::size_t>(n)] = std::polar(1.0, phase_step * static_cast<double>(n));
  }
}

std::vector<cdouble> steering_vector(double omega, const Scenario& scenario) {
  scenario.validate();
  std::vector<cdouble> s;
  fill_steering(s, omega, scenario);
  return s;
}

std::vector<std::int64_t> ramp_diagonal(std::int64_t n) {
  if (n < 1) throw std::invalid_argument("ramp_diagonal: n must be >= 1");
  std::vector<std::int64_t> d(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) d[static_cast<std::size_t>(i)] = i;
  return d;
}

void generate_observations_into(ObservationSet& obs, const Scenario& scenario,
                                Hypothesis hypothesis, std::uint64_t seed, bool noiseless) {
  scenario.validate();
  obs.sensors = scenario.M;
  obs.samples = scenario.N;
  obs.data.resize(static_cast<std::size_t>(scenario.M * scenario.N));

  const double omega =
      hypothesis == Hypothesis::H0 ? scenario.omega0 : scenario.omega0 + scenario.delta;
  std::vector<cdouble> s;
  fill_steering(s, omega, scenario);

  for (std::int64_t m = 0; m < scenario.M; ++m) {
    const cdouble a = scenario.amplitudes[static_cast<std::size_t>(m)];
    auto row = obs.row(m);
    for (std::int64_t n = 0; n < scenario.N; ++n) {
      row[static_cast<std::size_t>(n)] = a * s[static_cast<std::size_t>(n)];
    }
    if (noiseless) continue;
    // independent per-sensor stream: the fill order of sensors cannot matter
    GaussianPairs gauss(seed_combine(seed, kSensorStream, static_cast<std::uint64_t>(m)));
    const double scale =
        std::sqrt(scenario.variances[static_cast<std::size_t>(m)] / 2.0);
    for (std::int64_t n = 0; n < scenario.N; ++n) {
      const auto [z_re, z_im] = gauss.next();
      row[static_cast<std::size_t>(n)] += cdouble{scale * z_re, scale * z_im};
    }
  }
}

ObservationSet generate_observations(const Scenario& scenario, Hypothesis hypothesis,
                                     std::uint64_t seed, bool noiseless) {
  ObservationSet obs;
  generate_observations_into(obs, scenario, hypothesis, seed, noiseless);
  return obs;
}

double loglik(const ObservationSet& obs, double delta, std::span<const cdouble> amplitudes,
              const Scenario& scenario) {
  obs.validate_against(scenario);
  if (static_cast<std::int64_t>(amplitudes.size()) != scenario.M)
    throw std::invalid_argument("loglik: amplitudes must have length M");

  std::vector<cdouble> s;
  fill_steering(s, scenario.omega0 + delta, scenario);

  double total = 0.0;
  for (std::int64_t m = 0; m < scenario.M; ++m) {
    const cdouble a = amplitudes[static_cast<std::size_t>(m)];
    auto row = obs.row(m);
    double sq = 0.0;
    for (std::int64_t n = 0; n < scenario.N; ++n) {
      const cdouble r = row[static_cast<std::size_t>(n)] - a * s[static_cast<std::size_t>(n)];
      sq += r.real() * r.real() + r.imag() * r.imag();
    }
    total += sq / scenario.variances[static_cast<std::size_t>(m)];
  }
  return -total;
}

double snr_to_variance(cdouble amplitude, double snr_db) {
  const double p = amplitude.real() * amplitude.real() + amplitude.imag() * amplitude.imag();
  if (p == 0.0) throw std::invalid_argument("snr_to_variance: amplitude must be nonzero");
  return p / std::pow(10.0, snr_db / 10.0);
}

}  // namespace freqdet
