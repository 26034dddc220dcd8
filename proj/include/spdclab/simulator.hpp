#ifndef SPDCLAB_SIMULATOR_HPP
#define SPDCLAB_SIMULATOR_HPP

//
// Seeded Monte Carlo generation of time-tag streams from a parametrized
// source / arm / detector model: Poisson pair emission, a two-sided
// exponential signal-idler delay, per-detection Gaussian jitter, binomial
// survival, HBT splitting, dark counts and detector dead time.
//
// Channel layout: 0 and 1 are the signal-arm HBT detectors (APD1, APD2),
// 2 is the idler detector (APD3).
//

#include <cstdint>
#include <optional>
#include <vector>

#include "spdclab/correlator.hpp"
#include "spdclab/pair_model.hpp"
#include "spdclab/rng.hpp"
#include "spdclab/time_tags.hpp"

namespace spdc {

inline constexpr std::size_t kApd1 = 0;
inline constexpr std::size_t kApd2 = 1;
inline constexpr std::size_t kApd3 = 2;

struct DetectorParams {
  double efficiency = 0.60;
  // Per-detection jitter; a detector-pair cross-correlation then has width
  // sigma * sqrt(2) = 0.7304 ns (1.72 ns FWHM).
  double jitter_sigma_ns = 0.5165;
  double dead_time_ns = 22.0;
  double dark_rate_hz = 250.0;
};

struct ArmParams {
  double transmission = 1.0;  // all optics and filters in front of the detector
  DetectorParams detector;
  // HBT split ratio: fraction of surviving photons routed to the first of the
  // arm's two detectors. Unset means a single detector takes everything.
  std::optional<double> splitter;
};

struct SourceParams {
  double pair_rate_per_s_mw = 2.1e5;  // R
  double pump_power_mw = 1.2;
  // Two-sided exponential pair delay d = t_signal - t_idler: constant of the
  // d < 0 side (joint source line) and of the d >= 0 side (source line times
  // the narrower idler filter).
  double tau_lead_ns = 0.704;
  double tau_trail_ns = 1.00;
  // Optional single-thermal-mode statistics: pair emission times are drawn in
  // correlated bursts such that the emission autocorrelation is exactly
  // 1 + exp(-2|tau|/tau0). Required to reproduce thermal bunching in the
  // idler autocorrelation; plain Poisson placement is used otherwise.
  bool thermal_bunching = false;
  double thermal_tau0_ns = 2.0;

  double generation_rate_hz() const { return pair_rate_per_s_mw * pump_power_mw; }
};

struct SimConfig {
  SourceParams source;
  ArmParams signal_arm;
  ArmParams idler_arm;
  double duration_s = 1.0;
  std::uint64_t seed = 1;
  std::int64_t resolution_ps = 1;
};

// The characterized operating point of the source: arm transmissions chosen
// so that the total signal / idler arm efficiencies come out at 27 % and
// 6.8 % with 60 % detectors, a 50/50 signal HBT split, and default detector
// parameters.
SimConfig reference_config();

// One draw of the signal-idler delay d = t_s - t_i:
// p(d) ~ exp(d / tau_lead) for d < 0, exp(-d / tau_trail) for d >= 0.
double sample_pair_delay(const SourceParams& source, Xoshiro256pp& rng);

// Full three-detector experiment. Identical configs (including seed) produce
// bit-identical stream sets. Simulation parameters, seed and the RNG id are
// recorded in the result metadata.
TimeTagStreamSet simulate_experiment(const SimConfig& cfg);
TimeTagStreamSet simulate_experiment(const SourceParams& source, const ArmParams& signal_arm,
                                     const ArmParams& idler_arm, double duration_s,
                                     std::uint64_t seed);

// Substream seed for grid point `index` of a sweep.
inline std::uint64_t sweep_point_seed(std::uint64_t seed, std::uint64_t index) {
  return mix64(seed ^ mix64(index + 0x632be59bd9b4e019ULL));
}

// One independent simulation per R*P grid point (pump power fixed at 1 mW so
// the grid value is the pair generation rate). Point seeds derive from
// (seed, index), so results do not depend on evaluation order.
std::vector<TimeTagStreamSet> simulate_sweep(const SimConfig& base,
                                             const std::vector<double>& rate_grid_hz,
                                             double duration_s, std::uint64_t seed);

struct SweepPoint {
  double rate_pairs_per_s = 0.0;
  double eq1_prediction = 0.0;
  HeraldedG2Result heralded;
};

// Simulates each grid point and extracts the heralded g2_c (idler heralds,
// signal HBT channels), next to the closed-form prediction 2p - p^2 at the
// same coincidence window. Points are simulated one at a time, with the same
// per-point seeds as simulate_sweep.
std::vector<SweepPoint> run_rate_sweep(const SimConfig& base,
                                       const std::vector<double>& rate_grid_hz,
                                       double duration_s, std::uint64_t seed,
                                       double window_ns = 8.0, double offset_ns = 0.0);

}  // namespace spdc

#endif
