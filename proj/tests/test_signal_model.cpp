#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "freqdet/detectors.hpp"
#include "freqdet/rng.hpp"
#include "freqdet/scenario.hpp"
#include "freqdet/signal_model.hpp"
#include "test_support.hpp"

using namespace freqdet;
using testsupport::random_scenario;
using testsupport::tiny_scenario;

TEST_CASE("steering vector quarter-turn, zero and half-turn rotations") {
  Scenario s = tiny_scenario(1, 4, std::numbers::pi / 2.0, 10.0);

  auto quarter = steering_vector(s.omega0, s);  // entries exp(j*pi/2*n)
  REQUIRE(quarter.size() == 4);
  CHECK(quarter[0].real() == doctest::Approx(1.0));
  CHECK(quarter[0].imag() == doctest::Approx(0.0));
  CHECK(quarter[1].real() == doctest::Approx(0.0));
  CHECK(quarter[1].imag() == doctest::Approx(1.0));
  CHECK(quarter[2].real() == doctest::Approx(-1.0));
  CHECK(quarter[2].imag() == doctest::Approx(0.0));
  CHECK(quarter[3].real() == doctest::Approx(0.0));
  CHECK(quarter[3].imag() == doctest::Approx(-1.0));

  auto ones = steering_vector(0.0, s);
  for (const cdouble& z : ones) {
    CHECK(z.real() == 1.0);
    CHECK(z.imag() == 0.0);
  }

  auto half = steering_vector(2.0 * s.omega0, s);  // entries exp(j*pi*n)
  CHECK(half[0].real() == doctest::Approx(1.0));
  CHECK(half[1].real() == doctest::Approx(-1.0));
  CHECK(half[2].real() == doctest::Approx(1.0));
  CHECK(half[3].real() == doctest::Approx(-1.0));
  for (const cdouble& z : half) CHECK(std::abs(z.imag()) < 1e-15);
}

TEST_CASE("steering vector invariants: unit modulus, leading one, s^H s = N") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int rep = 0; rep < 50; ++rep) {
    Scenario s = random_scenario(rng);
    const double omega = s.omega0 * (1.0 + u(rng));
    auto sv = steering_vector(omega, s);
    REQUIRE(static_cast<std::int64_t>(sv.size()) == s.N);
    CHECK(sv[0] == cdouble{1.0, 0.0});
    double energy = 0.0;
    for (const cdouble& z : sv) {
      CHECK(std::abs(std::abs(z) - 1.0) < 1e-15);
      energy += std::norm(z);
    }
    CHECK(energy == doctest::Approx(static_cast<double>(s.N)).epsilon(1e-14));
  }
}

TEST_CASE("ramp diagonal") {
  auto d = ramp_diagonal(5);
  REQUIRE(d.size() == 5);
  CHECK(d.front() == 0);
  for (std::size_t i = 1; i < d.size(); ++i) CHECK(d[i] == d[i - 1] + 1);
  CHECK_THROWS_AS(ramp_diagonal(0), std::invalid_argument);
}

TEST_CASE("scenario validation rejects bad fields") {
  Scenario s = default_scenario();
  CHECK_NOTHROW(s.validate());

  Scenario bad = s;
  bad.M = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = s;
  bad.variances[2] = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = s;
  bad.gamma = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = s;
  bad.omega0 = -1.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = s;
  bad.delta = s.delta_bound();  // half-open range excludes the upper endpoint
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = s;
  bad.amplitudes.pop_back();
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("default scenario matches the benchmark parameterization") {
  Scenario s = default_scenario();
  CHECK(s.M == 6);
  CHECK(s.N == 48);
  CHECK(s.gamma == doctest::Approx(2.0 * std::numbers::pi / 48.0));
  CHECK(s.omega0 == doctest::Approx(2.0 * std::numbers::pi * 60.0));
  CHECK(std::abs(s.amplitudes[2]) == doctest::Approx(std::sqrt(3.0)));
  // equal SNR of 0 dB puts sigma_m^2 = |A_m|^2
  for (std::int64_t m = 0; m < s.M; ++m)
    CHECK(s.variances[static_cast<std::size_t>(m)] ==
          doctest::Approx(std::norm(s.amplitudes[static_cast<std::size_t>(m)])));
}

TEST_CASE("noiseless H0 generation reproduces the pure tone exactly") {
  Scenario s = tiny_scenario(2, 6, 0.3, 5.0);
  s.amplitudes[1] = cdouble{0.5, -1.25};
  auto obs = generate_observations(s, Hypothesis::H0, 99, /*noiseless=*/true);
  auto tone = steering_vector(s.omega0, s);
  for (std::int64_t m = 0; m < s.M; ++m) {
    for (std::int64_t n = 0; n < s.N; ++n) {
      CHECK(obs.at(m, n) == s.amplitudes[static_cast<std::size_t>(m)] *
                                tone[static_cast<std::size_t>(n)]);
    }
  }
}

TEST_CASE("generation is bit-reproducible and H1 at delta=0 equals H0") {
  Scenario s = default_scenario();
  auto a = generate_observations(s, Hypothesis::H0, 1234);
  auto b = generate_observations(s, Hypothesis::H0, 1234);
  CHECK(a.data == b.data);

  auto c = generate_observations(s.with_delta(0.0), Hypothesis::H1, 1234);
  CHECK(a.data == c.data);

  auto d = generate_observations(s, Hypothesis::H0, 1235);
  CHECK(a.data != d.data);
}

TEST_CASE("noise power matches sigma^2 within 3 standard errors") {
  Scenario s = tiny_scenario(2, 64, 0.4, 7.0);
  s.variances = {2.5, 0.5};
  auto tone = steering_vector(s.omega0, s);

  const int trials = 200;
  for (std::int64_t m = 0; m < s.M; ++m) {
    double power = 0.0;
    for (int t = 0; t < trials; ++t) {
      auto obs = generate_observations(s, Hypothesis::H0, 5000 + static_cast<std::uint64_t>(t));
      for (std::int64_t n = 0; n < s.N; ++n) {
        const cdouble w = obs.at(m, n) - s.amplitudes[static_cast<std::size_t>(m)] *
                                            tone[static_cast<std::size_t>(n)];
        power += std::norm(w);
      }
    }
    const double samples = static_cast<double>(trials) * static_cast<double>(s.N);
    const double mean_power = power / samples;
    const double sigma2 = s.variances[static_cast<std::size_t>(m)];
    // |w|^2 has mean sigma^2 and variance sigma^4
    const double se = sigma2 / std::sqrt(samples);
    CHECK(std::abs(mean_power - sigma2) < 3.0 * se);
  }
}

TEST_CASE("loglik is zero on an exact fit and negative otherwise") {
  std::mt19937_64 rng(21);
  Scenario s = random_scenario(rng);
  auto obs = generate_observations(s, Hypothesis::H1, 77, /*noiseless=*/true);
  CHECK(loglik(obs, s.delta, s.amplitudes, s) == 0.0);

  auto noisy = generate_observations(s, Hypothesis::H1, 77);
  CHECK(loglik(noisy, s.delta, s.amplitudes, s) < 0.0);
}

TEST_CASE("loglik of all-zero data against a unit tone is -N/sigma^2") {
  Scenario s = tiny_scenario(1, 12, 0.7, 3.0);
  s.variances[0] = 4.0;
  ObservationSet zeros(1, 12);
  for (double delta : {0.0, 0.4, -1.1}) {
    CHECK(loglik(zeros, delta, s.amplitudes, s) ==
          doctest::Approx(-static_cast<double>(s.N) / 4.0).epsilon(1e-14));
  }
}

TEST_CASE("loglik profile over a fine grid peaks with the periodogram objective") {
  std::mt19937_64 rng(31);
  for (int rep = 0; rep < 5; ++rep) {
    Scenario s = random_scenario(rng, 3, 16);
    auto obs = generate_observations(s, Hypothesis::H1, 900 + static_cast<std::uint64_t>(rep));

    const double bound = 0.45 * s.delta_bound();
    const int points = 101;
    std::size_t best_ll = 0, best_obj = 0;
    double ll_max = -1e300, obj_max = -1e300;
    for (int k = 0; k < points; ++k) {
      const double d = -bound + 2.0 * bound * static_cast<double>(k) / (points - 1);
      // profile likelihood: amplitudes at their per-delta ML values
      const auto amp = amplitude_ml_alt(obs, s, d);
      const double ll = loglik(obs, d, amp, s);
      // periodogram objective evaluated independently
      auto sv = steering_vector(s.omega0 + d, s);
      double obj = 0.0;
      for (std::int64_t m = 0; m < s.M; ++m) {
        cdouble w{0.0, 0.0};
        for (std::int64_t n = 0; n < s.N; ++n)
          w += std::conj(sv[static_cast<std::size_t>(n)]) * obs.at(m, n);
        obj += std::norm(w) / s.variances[static_cast<std::size_t>(m)];
      }
      obj /= static_cast<double>(s.N);
      if (ll > ll_max) {
        ll_max = ll;
        best_ll = static_cast<std::size_t>(k);
      }
      if (obj > obj_max) {
        obj_max = obj;
        best_obj = static_cast<std::size_t>(k);
      }
    }
    CHECK(best_ll == best_obj);
  }
}

TEST_CASE("snr_to_variance") {
  CHECK(snr_to_variance(cdouble{1.0, 0.0}, 0.0) == doctest::Approx(1.0));
  CHECK(snr_to_variance(cdouble{1.0, 0.0}, 10.0) == doctest::Approx(0.1));
  CHECK(snr_to_variance(cdouble{std::sqrt(3.0), 0.0}, 0.0) == doctest::Approx(3.0));
  CHECK(snr_to_variance(cdouble{0.0, -2.0}, 3.0) == doctest::Approx(4.0 / std::pow(10.0, 0.3)));
  CHECK_THROWS_AS(snr_to_variance(cdouble{0.0, 0.0}, 0.0), std::invalid_argument);
}

TEST_CASE("observation dimensions are validated") {
  Scenario s = tiny_scenario(2, 8, 0.3, 5.0);
  ObservationSet obs(2, 7);
  CHECK_THROWS_AS(obs.validate_against(s), std::invalid_argument);
  CHECK_THROWS_AS(loglik(obs, 0.0, s.amplitudes, s), std::invalid_argument);
}
