// ============================================================================
// signal_model.hpp -- steering vectors, observation synthesis, log-likelihood
// ============================================================================
#pragma once
#include <cstdint>
#include <span>
#include <vector>

#include "freqdet/scenario.hpp"

namespace freqdet {

/// Steering vector s(omega): entry n = exp(j*gamma*(omega/omega0)*n) for
/// n = 0..N-1.  Entry 0 is exactly 1 and every entry has unit modulus.
std::vector<cdouble> steering_vector(double omega, const Scenario& scenario);

/// Writes s(omega) into `out` (resized to scenario.N).  Same arithmetic as
/// steering_vector, provided so hot loops can reuse one buffer.
void fill_steering(std::vector<cdouble>& out, double omega, const Scenario& scenario);

/// Diagonal of the sample-index ramp D_N: [0, 1, ..., n-1].
std::vector<std::int64_t> ramp_diagonal(std::int64_t n);

/// Synthesizes x_m[n] = A_m * s_n(omega) + w_m[n] with omega = omega0 (H0) or
/// omega0 + delta (H1).  Noise is circularly symmetric complex Gaussian with
/// per-sensor variance sigma_m^2 (each real part N(0, sigma_m^2/2)), drawn from
/// a per-sensor stream seeded by seed_combine(seed, kSensorStream, m), so the
/// result is independent of the order in which sensors are filled.  With
/// noiseless=true the noise term is omitted entirely.
ObservationSet generate_observations(const Scenario& scenario, Hypothesis hypothesis,
                                     std::uint64_t seed, bool noiseless = false);

/// As generate_observations but reuses the caller's buffer.
void generate_observations_into(ObservationSet& obs, const Scenario& scenario,
                                Hypothesis hypothesis, std::uint64_t seed,
                                bool noiseless = false);

/// Log-likelihood with constants dropped:
///   -sum_m ||x_m - A_m s(omega0+delta)||^2 / sigma_m^2.
/// Always <= 0, with equality exactly when the observations equal the
/// noiseless signal.
double loglik(const ObservationSet& obs, double delta, std::span<const cdouble> amplitudes,
              const Scenario& scenario);

/// sigma^2 = |A|^2 / 10^(snr_db/10); throws on a zero amplitude.
double snr_to_variance(cdouble amplitude, double snr_db);

}  // namespace freqdet
