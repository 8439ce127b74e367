#include "freqdet/detectors.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

#include "freqdet/signal_model.hpp"

namespace freqdet {

void GridSpec::validate() const {
  if (n_alpha < 1) throw std::invalid_argument("GridSpec: n_alpha must be >= 1");
  if (!(lo < hi)) throw std::invalid_argument("GridSpec: lo must be < hi");
  if (!std::isfinite(lo) || !std::isfinite(hi))
    throw std::invalid_argument("GridSpec: endpoints must be finite");
}

std::vector<double> GridSpec::points() const {
  validate();
  std::vector<double> pts(static_cast<std::size_t>(n_alpha));
  const double span = hi - lo;
  for (std::int64_t k = 0; k < n_alpha; ++k) {
    pts[static_cast<std::size_t>(k)] =
        lo + span * (static_cast<double>(k) / static_cast<double>(n_alpha));
  }
  return pts;
}

GridSpec default_grid(const Scenario& scenario, std::int64_t n_alpha) {
  const double b = scenario.delta_bound();
  return GridSpec{n_alpha, -b, b};
}

std::string detector_name(DetectorId id) {
  switch (id) {
    case DetectorId::LRT: return "LRT";
    case DetectorId::GLRT: return "GLRT";
    case DetectorId::LMPU: return "LMPU";
    case DetectorId::GLMPU: return "GLMPU";
    case DetectorId::GLMP1S: return "GLMP1S";
  }
  throw std::invalid_argument("detector_name: bad enum value");
}

DetectorId detector_from_name(std::string_view name) {
  if (name == "LRT") return DetectorId::LRT;
  if (name == "GLRT") return DetectorId::GLRT;
  if (name == "LMPU") return DetectorId::LMPU;
  if (name == "GLMPU") return DetectorId::GLMPU;
  if (name == "GLMP1S") return DetectorId::GLMP1S;
  throw std::invalid_argument("unknown detector name: " + std::string(name));
}

namespace {

// conj(s(omega0)) weighted by the ramp powers used in the score statistics
struct NullSteeringWeights {
  std::vector<cdouble> c0;  // conj(s_n)
  std::vector<cdouble> c1;  // n * conj(s_n)
  std::vector<cdouble> c2;  // n^2 * conj(s_n)
};

NullSteeringWeights make_null_weights(const Scenario& scenario) {
  NullSteeringWeights w;
  std::vector<cdouble> s;
  fill_steering(s, scenario.omega0, scenario);
  const std::size_t n_sz = s.size();
  w.c0.resize(n_sz);
  w.c1.resize(n_sz);
  w.c2.resize(n_sz);
  for (std::size_t n = 0; n < n_sz; ++n) {
    const cdouble c = std::conj(s[n]);
    const double nn = static_cast<double>(n);
    w.c0[n] = c;
    w.c1[n] = nn * c;
    w.c2[n] = (nn * nn) * c;
  }
  return w;
}

struct SensorMoments {
  cdouble w0;  // s^H x
  cdouble w1;  // (D s)^H x  = conj(x^H D s)
  cdouble w2;  // (D^2 s)^H x
};

inline SensorMoments sensor_moments(std::span<const cdouble> row, std::span<const cdouble> c0,
                                    std::span<const cdouble> c1, std::span<const cdouble> c2) {
  SensorMoments m{{0.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}};
  for (std::size_t n = 0; n < row.size(); ++n) {
    const cdouble x = row[n];
    m.w0 += c0[n] * x;
    m.w1 += c1[n] * x;
    m.w2 += c2[n] * x;
  }
  return m;
}

inline void check_amplitudes(std::span<const cdouble> amplitudes, const Scenario& scenario) {
  if (static_cast<std::int64_t>(amplitudes.size()) != scenario.M)
    throw std::invalid_argument("amplitudes must have length M");
}

// (1/N) sum_m |s^H x_m|^2 / sigma_m^2 for one steering row
inline double grid_objective(const ObservationSet& obs, std::span<const cdouble> s,
                             const Scenario& scenario) {
  double acc = 0.0;
  for (std::int64_t m = 0; m < scenario.M; ++m) {
    auto row = obs.row(m);
    cdouble w{0.0, 0.0};
    for (std::size_t n = 0; n < row.size(); ++n) w += std::conj(s[n]) * row[n];
    acc += std::norm(w) / scenario.variances[static_cast<std::size_t>(m)];
  }
  return acc / static_cast<double>(scenario.N);
}

// smaller |alpha| wins; at equal magnitude the negative sign wins
inline bool tie_prefers(double candidate, double incumbent) {
  const double ac = std::abs(candidate);
  const double ai = std::abs(incumbent);
  if (ac != ai) return ac < ai;
  return candidate < incumbent;
}

struct GridSearchOutcome {
  std::size_t best_index = 0;
  double best_value = 0.0;
  double zero_value = 0.0;
};

// Evaluates the objective at every point.  `table`, when non-null, holds the
// steering rows contiguously (points.size() x N); otherwise rows are generated
// on the fly through the same fill routine, so results are identical.
GridSearchOutcome search_grid(const ObservationSet& obs, const Scenario& scenario,
                              std::span<const double> points, const cdouble* table,
                              std::optional<std::size_t> zero_index) {
  GridSearchOutcome out;
  std::vector<cdouble> buffer;
  bool first = true;
  for (std::size_t k = 0; k < points.size(); ++k) {
    std::span<const cdouble> row;
    if (table != nullptr) {
      row = {table + k * static_cast<std::size_t>(scenario.N),
             static_cast<std::size_t>(scenario.N)};
    } else {
      fill_steering(buffer, scenario.omega0 + points[k], scenario);
      row = buffer;
    }
    const double v = grid_objective(obs, row, scenario);
    if (first || v > out.best_value ||
        (v == out.best_value && tie_prefers(points[k], points[out.best_index]))) {
      out.best_index = k;
      out.best_value = v;
      first = false;
    }
    if (zero_index && k == *zero_index) out.zero_value = v;
  }
  return out;
}

// grid points with alpha = 0 inserted when absent; returns its index
std::pair<std::vector<double>, std::size_t> points_with_zero(const GridSpec& grid) {
  std::vector<double> pts = grid.points();
  auto it = std::find(pts.begin(), pts.end(), 0.0);
  if (it == pts.end()) {
    it = pts.insert(std::lower_bound(pts.begin(), pts.end(), 0.0), 0.0);
  }
  return {std::move(pts), static_cast<std::size_t>(it - pts.begin())};
}

// linear and quadratic accumulators of the amplitude-free statistics:
//   lin  = sum_m (2 gamma / (N omega0 sigma_m^2)) Im{x^H D s s^H x}
//   quad = sum_m (2 gamma^2 / (N omega0^2 sigma_m^2)) Re{x^H D D s s^H x}
struct PlugInSums {
  double lin = 0.0;
  double quad = 0.0;
};

PlugInSums plug_in_sums(const ObservationSet& obs, const Scenario& scenario,
                        const NullSteeringWeights& w) {
  PlugInSums sums;
  const double n_d = static_cast<double>(scenario.N);
  for (std::int64_t m = 0; m < scenario.M; ++m) {
    const SensorMoments mom = sensor_moments(obs.row(m), w.c0, w.c1, w.c2);
    const double inv = 1.0 / (n_d * scenario.variances[static_cast<std::size_t>(m)]);
    const double coef1 = 2.0 * scenario.gamma / scenario.omega0 * inv;
    const double coef2 =
        2.0 * scenario.gamma * scenario.gamma / (scenario.omega0 * scenario.omega0) * inv;
    // x^H D s s^H x = conj(w1) * w0,   x^H D D s s^H x = conj(w2) * w0
    sums.lin += coef1 * (std::conj(mom.w1) * mom.w0).imag();
    sums.quad += coef2 * (std::conj(mom.w2) * mom.w0).real();
  }
  return sums;
}

// known-amplitudes accumulators shared by lmpu_statistic and the evaluator
struct ScoreSums {
  double im_sum = 0.0;  // sum_m coef1_m Im{A_m x^H D s}   (negated first score)
  double re_sum = 0.0;  // sum_m coef2_m Re{A_m x^H D D s} (negated second score)
};

ScoreSums score_sums(const ObservationSet& obs, const Scenario& scenario,
                     std::span<const cdouble> amplitudes, const NullSteeringWeights& w) {
  ScoreSums sums;
  for (std::int64_t m = 0; m < scenario.M; ++m) {
    const SensorMoments mom = sensor_moments(obs.row(m), w.c0, w.c1, w.c2);
    const cdouble a = amplitudes[static_cast<std::size_t>(m)];
    const double inv_var = 1.0 / scenario.variances[static_cast<std::size_t>(m)];
    const double coef1 = 2.0 * scenario.gamma / scenario.omega0 * inv_var;
    const double coef2 = 2.0 * scenario.gamma * scenario.gamma /
                         (scenario.omega0 * scenario.omega0) * inv_var;
    // x^H D s = conj(w1), x^H D D s = conj(w2)
    sums.im_sum += coef1 * (a * std::conj(mom.w1)).imag();
    sums.re_sum += coef2 * (a * std::conj(mom.w2)).real();
  }
  return sums;
}

}  // namespace

// ---------------------------------------------------------------------------

double lrt_statistic(const ObservationSet& obs, const Scenario& scenario, double delta,
                     std::span<const cdouble> amplitudes) {
  obs.validate_against(scenario);
  check_amplitudes(amplitudes, scenario);

  std::vector<cdouble> s_alt;
  std::vector<cdouble> s_null;
  fill_steering(s_alt, scenario.omega0 + delta, scenario);
  fill_steering(s_null, scenario.omega0, scenario);

  double term_alt = 0.0;
  double term_null = 0.0;
  for (std::int64_t m = 0; m < scenario.M; ++m) {
    auto row = obs.row(m);
    cdouble u_alt{0.0, 0.0};
    cdouble u_null{0.0, 0.0};
    for (std::size_t n = 0; n < row.size(); ++n) {
      const cdouble xc = std::conj(row[n]);  // x^H s accumulates conj(x_n) s_n
      u_alt += xc * s_alt[n];
      u_null += xc * s_null[n];
    }
    const cdouble a = amplitudes[static_cast<std::size_t>(m)];
    const double inv_var = 1.0 / scenario.variances[static_cast<std::size_t>(m)];
    term_alt += (a * u_alt).real() * inv_var;
    term_null += (a * u_null).real() * inv_var;
  }
  return term_alt - term_null;
}

double ml_frequency(const ObservationSet& obs, const Scenario& scenario, const GridSpec& grid) {
  obs.validate_against(scenario);
  const std::vector<double> pts = grid.points();
  const GridSearchOutcome out = search_grid(obs, scenario, pts, nullptr, std::nullopt);
  return pts[out.best_index];
}

std::vector<cdouble> amplitude_ml_null(const ObservationSet& obs, const Scenario& scenario) {
  return amplitude_ml_alt(obs, scenario, 0.0);
}

std::vector<cdouble> amplitude_ml_alt(const ObservationSet& obs, const Scenario& scenario,
                                      double delta_hat) {
  obs.validate_against(scenario);
  std::vector<cdouble> s;
  fill_steering(s, scenario.omega0 + delta_hat, scenario);
  std::vector<cdouble> amp(static_cast<std::size_t>(scenario.M));
  for (std::int64_t m = 0; m < scenario.M; ++m) {
    auto row = obs.row(m);
    cdouble w{0.0, 0.0};
    for (std::size_t n = 0; n < row.size(); ++n) w += std::conj(s[n]) * row[n];
    amp[static_cast<std::size_t>(m)] = w / static_cast<double>(scenario.N);
  }
  return amp;
}

double glrt_statistic(const ObservationSet& obs, const Scenario& scenario, const GridSpec& grid) {
  obs.validate_against(scenario);
  auto [pts, zero_idx] = points_with_zero(grid);
  const GridSearchOutcome out = search_grid(obs, scenario, pts, nullptr, zero_idx);
  return out.best_value - out.zero_value;
}

double score_first(const ObservationSet& obs, const Scenario& scenario,
                   std::span<const cdouble> amplitudes) {
  obs.validate_against(scenario);
  check_amplitudes(amplitudes, scenario);
  const NullSteeringWeights w = make_null_weights(scenario);
  double acc = 0.0;
  for (std::int64_t m = 0; m < scenario.M; ++m) {
    const SensorMoments mom = sensor_moments(obs.row(m), w.c0, w.c1, w.c2);
    const cdouble a = amplitudes[static_cast<std::size_t>(m)];
    const double coef = 2.0 * scenario.gamma /
                        (scenario.omega0 * scenario.variances[static_cast<std::size_t>(m)]);
    acc += coef * (a * std::conj(mom.w1)).imag();  // Im{A_m x_m^H D s}
  }
  return -acc;
}

double score_second(const ObservationSet& obs, const Scenario& scenario,
                    std::span<const cdouble> amplitudes) {
  obs.validate_against(scenario);
  check_amplitudes(amplitudes, scenario);
  const NullSteeringWeights w = make_null_weights(scenario);
  double acc = 0.0;
  for (std::int64_t m = 0; m < scenario.M; ++m) {
    const SensorMoments mom = sensor_moments(obs.row(m), w.c0, w.c1, w.c2);
    const cdouble a = amplitudes[static_cast<std::size_t>(m)];
    const double coef = 2.0 * scenario.gamma * scenario.gamma /
                        (scenario.omega0 * scenario.omega0 *
                         scenario.variances[static_cast<std::size_t>(m)]);
    acc += coef * (a * std::conj(mom.w2)).real();  // Re{A_m x_m^H D D s}
  }
  return -acc;
}

double lmpu_statistic(const ObservationSet& obs, const Scenario& scenario,
                      std::span<const cdouble> amplitudes, const KappaPair& kappa) {
  obs.validate_against(scenario);
  check_amplitudes(amplitudes, scenario);
  const NullSteeringWeights w = make_null_weights(scenario);
  const ScoreSums s = score_sums(obs, scenario, amplitudes, w);
  return -s.re_sum + s.im_sum * s.im_sum - kappa.kappa1 + kappa.kappa2 * s.im_sum;
}

double glmpu_statistic(const ObservationSet& obs, const Scenario& scenario,
                       const KappaPair& kappa) {
  obs.validate_against(scenario);
  const NullSteeringWeights w = make_null_weights(scenario);
  const PlugInSums s = plug_in_sums(obs, scenario, w);
  return -s.quad + s.lin * s.lin - kappa.kappa1 + kappa.kappa2 * s.lin;
}

double glmp_one_sided(const ObservationSet& obs, const Scenario& scenario) {
  obs.validate_against(scenario);
  const NullSteeringWeights w = make_null_weights(scenario);
  const PlugInSums s = plug_in_sums(obs, scenario, w);
  return -s.lin;  // d loglik / d delta at the plug-in amplitudes
}

// ---------------------------------------------------------------------------
// StatisticEvaluator
// ---------------------------------------------------------------------------

StatisticEvaluator::StatisticEvaluator(DetectorId id, Scenario scenario, GridSpec grid,
                                       double kappa2)
    : id_(id), scenario_(std::move(scenario)), grid_(grid), kappa2_(kappa2) {
  scenario_.validate();
  grid_.validate();

  if (id_ == DetectorId::GLRT) {
    auto [pts, zero_idx] = points_with_zero(grid_);
    search_points_ = std::move(pts);
    zero_index_ = zero_idx;
    const std::int64_t entries =
        static_cast<std::int64_t>(search_points_.size()) * scenario_.N;
    tabulated_ = entries <= kSteeringTableBudget;
    if (tabulated_) {
      steering_table_.resize(static_cast<std::size_t>(entries));
      std::vector<cdouble> row;
      for (std::size_t k = 0; k < search_points_.size(); ++k) {
        fill_steering(row, scenario_.omega0 + search_points_[k], scenario_);
        std::copy(row.begin(), row.end(),
                  steering_table_.begin() + static_cast<std::ptrdiff_t>(
                                                k * static_cast<std::size_t>(scenario_.N)));
      }
    }
    return;
  }

  const NullSteeringWeights w = make_null_weights(scenario_);
  conj_s0_ = w.c0;
  conj_s0_n_ = w.c1;
  conj_s0_n2_ = w.c2;
  if (id_ == DetectorId::LRT) {
    fill_steering(s_delta_, scenario_.omega0 + scenario_.delta, scenario_);
   
  }
}

double StatisticEvaluator::glrt_eval(const ObservationSet& obs) const {
  const GridSearchOutcome out =
      search_grid(obs, scenario_, search_points_,
                  tabulated_ ? steering_table_.data() : nullptr, zero_index_);
  return out.best_value - out.zero_value;
}

double StatisticEvaluator::raw(const ObservationSet& obs) const {
  obs.validate_against(scenario_);
  switch (id_) {
    case DetectorId::GLRT:
      return glrt_eval(obs);
    case DetectorId::LRT: {
      double term_alt = 0.0;
      double term_null = 0.0;
      for (std::int64_t m = 0; m < scenario_.M; ++m) {
        auto row = obs.row(m);
        cdouble u_alt{0.0, 0.0};
        cdouble u_null{0.0, 0.0};
        for (std::size_t n = 0; n < row.size(); ++n) {
          const cdouble xc = std::conj(row[n]);
          u_alt += xc * s_delta_[n];
          u_null += xc * std::conj(conj_s0_[n]);   // conj_s0_ holds conj(s(omega0))
        }
        const cdouble a = scenario_.amplitudes[static_cast<std::size_t>(m)];
        const double inv_var = 1.0 / scenario_.variances[static_cast<std::size_t>(m)];
        term_alt += (a * u_alt).real() * inv_var;
        term_null += (a * u_null).real() * inv_var;
      }
      return term_alt - term_null;
    }
    default: {
      const auto [quad, lin] = components(obs);
      return quad + kappa2_ * lin;
    }
  }
}

std::pair<double, double> StatisticEvaluator::components(const ObservationSet& obs) const {
  obs.validate_against(scenario_);
  switch (id_) {
    case DetectorId::LMPU: {
      double im_sum = 0.0;
      double re_sum = 0.0;
      for (std::int64_t m = 0; m < scenario_.M; ++m) {
        const SensorMoments mom = sensor_moments(obs.row(m), conj_s0_, conj_s0_n_, conj_s0_n2_);
        const cdouble a = scenario_.amplitudes[static_cast<std::size_t>(m)];
        const double inv_var = 1.0 / scenario_.variances[static_cast<std::size_t>(m)];
        const double coef1 = 2.0 * scenario_.gamma / scenario_.omega0 * inv_var;
        const double coef2 = 2.0 * scenario_.gamma * scenario_.gamma /
                             (scenario_.omega0 * scenario_.omega0) * inv_var;
        im_sum += coef1 * (a * std::conj(mom.w1)).imag();
        re_sum += coef2 * (a * std::conj(mom.w2)).real();
      }
      return {-re_sum + im_sum * im_sum, im_sum};
    }
    case DetectorId::GLMPU:
    case DetectorId::GLMP1S: {
      double lin = 0.0;
      double quad = 0.0;
      const double n_d = static_cast<double>(scenario_.N);
      for (std::int64_t m = 0; m < scenario_.M; ++m) {
        const SensorMoments mom = sensor_moments(obs.row(m), conj_s0_, conj_s0_n_, conj_s0_n2_);
        const double inv = 1.0 / (n_d * scenario_.variances[static_cast<std::size_t>(m)]);
        const double coef1 = 2.0 * scenario_.gamma / scenario_.omega0 * inv;
        const double coef2 = 2.0 * scenario_.gamma * scenario_.gamma /
                             (scenario_.omega0 * scenario_.omega0) * inv;
        lin += coef1 * (std::conj(mom.w1) * mom.w0).imag();
        quad += coef2 * (std::conj(mom.w2) * mom.w0).real();
      }
      if (id_ == DetectorId::GLMP1S) return {-lin, 0.0};
      return {-quad + lin * lin, lin};
    }
    default:
      throw std::logic_error("components(): only defined for LMPU/GLMPU/GLMP1S");
  }
}

}  // namespace freqdet
