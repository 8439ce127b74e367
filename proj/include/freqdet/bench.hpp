// ============================================================================
// bench.hpp -- analytic flop model and wall-clock statistic benchmark
//
// Flop convention: one complex multiply = 6 flops, one complex add = 2 flops,
// so a length-N complex inner product costs 8N-2.  The GLRT search term is the
// headline count N_alpha*(M*(2N+1)-1), which prices each per-grid-point
// sensor product |s^H x_m|^2 at 2N flops and the sum over sensors at M-1;
// steering-vector generation is excluded, matching a precomputed grid.  The
// GLRT recombination after the search is counted as 4*M*N.
// ============================================================================
#pragma once
#include <cstdint>
#include <span>
#include <vector>

#include "freqdet/detectors.hpp"
#include "freqdet/scenario.hpp"

namespace freqdet {

struct CostReport {
  DetectorId detector_id = DetectorId::GLMPU;
  std::int64_t N = 0;
  std::int64_t M = 0;
  std::int64_t n_alpha = 0;
  std::int64_t flops_model = 0;
  std::int64_t wall_ns_median = 0;
  std::int64_t wall_ns_p90 = 0;
  std::int64_t repetitions = 0;
  std::int64_t batch_k = 1;  ///< statistic calls per timed sample (timer-resolution batching)
};

/// Analytic flop count for one statistic evaluation.  Pure in
/// (detector, M, N, n_alpha); only the GLRT depends on n_alpha.
///   GLRT   : n_alpha*(M*(2N+1)-1) + 4*M*N
///   GLMPU  : M*(24N+10) + 5     (three length-N inner products + quadratic forms)
///   LMPU   : M*(16N+12) + 5     (two inner products, amplitude-weighted)
///   GLMP1S : M*(16N+6)  + 1     (two inner products, one quadratic form)
///   LRT    : M*(16N+11) + 1     (two inner products, amplitude-weighted)
std::int64_t flop_estimate(DetectorId id, const Scenario& scenario, const GridSpec& grid);

/// Times the statistic computation (setup, data generation and calibration
/// excluded) for each detector at each N.  One dataset per (detector, N); a
/// discarded warm-up run; if a single evaluation is faster than ~1 us the
/// statistic is batched batch_k times per timed sample and the time divided.
/// Runs strictly single-threaded.
std::vector<CostReport> runtime_sweep(std::span<const DetectorId> ids,
                                      std::span<const std::int64_t> n_values,
                                      const Scenario& base, const GridSpec& grid,
                                      std::int64_t repetitions, std::uint64_t seed);

}  // namespace freqdet
