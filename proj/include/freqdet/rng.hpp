// ============================================================================
// rng.hpp -- seed derivation and the Gaussian sampler used for all synthesis
//
// Every random quantity in this library is derived from a 64-bit seed through
// the functions below, so a run is fully determined by its master seed:
//
//   trial seed   = seed_combine(run_seed, stream_tag, trial_index)
//   sensor seed  = seed_combine(trial_seed, kSensorStream, sensor_index)
//
// seed_combine() is a SplitMix64-style finalizer applied to (seed ^ mix(tag)),
// and the underlying engine is std::mt19937_64, whose output sequence is fixed
// by the C++ standard.  Gaussians come from an explicit Box-Muller transform on
// 53-bit uniforms (not std::normal_distribution, which is implementation
// defined), so two builds against the same libm produce identical samples.
// ============================================================================
#pragma once
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <utility>

namespace freqdet {

/// SplitMix64 finalizer; bijective on 64-bit words.
inline constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline constexpr std::uint64_t seed_combine(std::uint64_t seed, std::uint64_t a) noexcept {
  return mix64(seed ^ mix64(a + 0x632be59bd9b4e019ULL));
}

inline constexpr std::uint64_t seed_combine(std::uint64_t seed, std::uint64_t a,
                                            std::uint64_t b) noexcept {
  return seed_combine(seed_combine(seed, a), b);
}

// Stream tags.  Calibration and evaluation draw from disjoint streams so a
// threshold is never scored on the sample that produced it.
inline constexpr std::uint64_t kCalibrationStream = 0xCA11;
inline constexpr std::uint64_t kEvaluationStream = 0xE7A1;
inline constexpr std::uint64_t kSensorStream = 0x5E50;
inline constexpr std::uint64_t kBenchStream = 0xBE9C;
inline constexpr std::uint64_t kPilotStream = 0x9107;

/// Box-Muller pairs over std::mt19937_64.  next() returns two independent
/// standard normals; one pair feeds one complex sample (re, im).
class GaussianPairs {
 public:
  explicit GaussianPairs(std::uint64_t seed) : eng_(seed) {}

  std::pair<double, double> next() {
    // u1 in (0,1] so log(u1) is finite; u2 in [0,1).
    const double u1 = (static_cast<double>(eng_() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(t), r * std::sin(t)};
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace freqdet
