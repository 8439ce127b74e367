#include "freqdet/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "freqdet/rng.hpp"
#include "freqdet/signal_model.hpp"

namespace freqdet {

std::int64_t flop_estimate(DetectorId id, const Scenario& scenario, const GridSpec& grid) {
  scenario.validate();
  grid.validate();
  const std::int64_t m = scenario.M;
  const std::int64_t n = scenario.N;
  const std::int64_t n_alpha = grid.n_alpha;
  switch (id) {
    case DetectorId::GLRT:
      // grid search: 2N flops per sensor product |s^H x_m|^2 plus M-1 adds per
      // point; recombination after the search: 4MN
      return n_alpha * (m * (2 * n + 1) - 1) + 4 * m * n;
    case DetectorId::GLMPU:
      // per sensor: three length-N inner products (8N-2 each), two complex
      // multiplies forming the quadratic forms (12), coefficient scalings and
      // accumulations (4); finish: square + kappa combination (5)
      return m * (24 * n + 10) + 5;
    case DetectorId::LMPU:
      // per sensor: two inner products (8N-2 each), two amplitude multiplies
      // (12), scalings/accumulations (4); finish (5)
      return m * (16 * n + 12) + 5;
    case DetectorId::GLMP1S:
      // per sensor: two inner products, one quadratic-form multiply (6),
      // scaling/accumulation (4); final negation (1)
      return m * (16 * n + 6) + 1;
    case DetectorId::LRT:
      // per sensor: two inner products, two amplitude multiplies, per-term
      // scaling and accumulation (3); final subtraction (1)
      return m * (16 * n + 11) + 1;
  }
  throw std::invalid_argument("flop_estimate: bad detector id");
}

namespace {

std::int64_t order_stat_ns(std::vector<std::int64_t> v, double q) {
  std::sort(v.begin(), v.end());
  auto k = static_cast<std::int64_t>(
      std::ceil(q * static_cast<double>(v.size()) - 1e-9));
  k = std::clamp<std::int64_t>(k, 1, static_cast<std::int64_t>(v.size()));
  return v[static_cast<std::size_t>(k - 1)];
}

}  // namespace

std::vector<CostReport> runtime_sweep(std::span<const DetectorId> ids,
                                      std::span<const std::int64_t> n_values,
                                      const Scenario& base, const GridSpec& grid,
                                      std::int64_t repetitions, std::uint64_t seed) {
  if (repetitions < 5) throw std::invalid_argument("runtime_sweep: repetitions must be >= 5");
  using clock = std::chrono::steady_clock;

  std::vector<CostReport> reports;
  for (DetectorId id : ids) {
    for (std::size_t i = 0; i < n_values.size(); ++i) {
      const Scenario scenario = base.with_samples(n_values[i]);
      scenario.validate();
      const StatisticEvaluator eval(id, scenario, grid, 0.0);
      const ObservationSet obs = generate_observations(
          scenario, Hypothesis::H1,
          seed_combine(seed, kBenchStream, static_cast<std::uint64_t>(i)));

      volatile double sink = 0.0;  // keep the statistic from being optimized out

      // warm-up (discarded) doubles as the batching estimate
      const auto warm_start = clock::now();
      sink = eval.raw(obs);
      const auto warm_ns = std::chrono::duration_cast<std::chrono::nanoseconds>(
                               clock::now() - warm_start)
                               .count();
      // batch sub-microsecond statistics so each timed sample spans >= ~100 us
      std::int64_t batch_k = 1;
      if (warm_ns < 1000) {
        batch_k = std::max<std::int64_t>(1, 100000 / std::max<std::int64_t>(warm_ns, 10));
      }

      std::vector<std::int64_t> samples;
      samples.reserve(static_cast<std::size_t>(repetitions));
      for (std::int64_t r = 0; r < repetitions; ++r) {
        const auto start = clock::now();
        for (std::int64_t b = 0; b < batch_k; ++b) sink = eval.raw(obs);
        const auto ns =
            std::chrono::duration_cast<std::chrono::nanoseconds>(clock::now() - start).count();
        samples.push_back(ns / batch_k);
      }
      (void)sink;

      CostReport report;
      report.detector_id = id;
      report.N = scenario.N;
      report.M = scenario.M;
      report.n_alpha = grid.n_alpha;
      report.flops_model = flop_estimate(id, scenario, grid);
      report.wall_ns_median = order_stat_ns(samples, 0.5);
      report.wall_ns_p90 = order_stat_ns(samples, 0.9);
      report.repetitions = repetitions;
      report.batch_k = batch_k;
      reports.push_back(report);
    }
  }
  return reports;
}

}  // namespace freqdet
