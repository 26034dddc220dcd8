#include "spdclab/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace spdc {

namespace {

void check_detector(const DetectorParams& d, const char* arm) {
  if (!(d.efficiency >= 0.0 && d.efficiency <= 1.0))
    throw std::invalid_argument(std::string(arm) + ": detector efficiency must be in [0, 1]");
  if (d.jitter_sigma_ns < 0.0 || d.dead_time_ns < 0.0 || d.dark_rate_hz < 0.0)
    throw std::invalid_argument(std::string(arm) + ": negative detector parameter");
}

void check_arm(const ArmParams& a, const char* arm) {
  if (!(a.transmission >= 0.0 && a.transmission <= 1.0))
    throw std::invalid_argument(std::string(arm) + ": transmission must be in [0, 1]");
  if (a.splitter && !(*a.splitter >= 0.0 && *a.splitter <= 1.0))
    throw std::invalid_argument(std::string(arm) + ": splitter must be in [0, 1]");
  check_detector(a.detector, arm);
}

void check_config(const SimConfig& cfg) {
  const SourceParams& s = cfg.source;
  if (!(s.pair_rate_per_s_mw >= 0.0) || !(s.pump_power_mw >= 0.0))
    throw std::invalid_argument("source: rate and pump power must be >= 0");
  if (!(s.tau_lead_ns > 0.0 && s.tau_lead_ns < 100.0) ||
      !(s.tau_trail_ns > 0.0 && s.tau_trail_ns < 100.0))
    throw std::invalid_argument("source: delay constants must be in (0, 100) ns");
  if (!(s.thermal_tau0_ns > 0.0))
    throw std::invalid_argument("source: thermal tau0 must be > 0");
  if (s.thermal_bunching && s.generation_rate_hz() * s.thermal_tau0_ns * 1e-9 > 1.0)
    throw std::invalid_argument(
        "source: thermal bunching requires R P tau0 <= 1 (one pair per coherence time)");
  if (!(cfg.duration_s > 0.0)) throw std::invalid_argument("simulate: duration must be > 0");
  if (cfg.resolution_ps < 1) throw std::invalid_argument("simulate: resolution must be >= 1 ps");
  check_arm(cfg.signal_arm, "signal arm");
  check_arm(cfg.idler_arm, "idler arm");
}

nlohmann::json detector_json(const DetectorParams& d) {
  return {{"efficiency", d.efficiency},
          {"jitter_sigma_ns", d.jitter_sigma_ns},
          {"dead_time_ns", d.dead_time_ns},
          {"dark_rate_hz", d.dark_rate_hz}};
}

nlohmann::json arm_json(const ArmParams& a) {
  nlohmann::json j = {{"transmission", a.transmission}, {"detector", detector_json(a.detector)}};
  if (a.splitter) j["splitter"] = *a.splitter;
  return j;
}

}  // namespace

SimConfig reference_config() {
  SimConfig cfg;
  cfg.signal_arm.transmission = 0.4533;  // eta_s = 0.272 with 60 % detectors
  cfg.signal_arm.splitter = 0.5;
  cfg.idler_arm.transmission = 0.1133;  // eta_i = 0.068
  return cfg;
}

double sample_pair_delay(const SourceParams& source, Xoshiro256pp& rng) {
  if (!(source.tau_lead_ns > 0.0 && source.tau_trail_ns > 0.0))
    throw std::invalid_argument("sample_pair_delay: delay constants must be > 0");
  const double w_trail = source.tau_trail_ns / (source.tau_lead_ns + source.tau_trail_ns);
  if (rng.uniform() < w_trail) return rng.exponential(source.tau_trail_ns);
  return -rng.exponential(source.tau_lead_ns);
}

TimeTagStreamSet simulate_experiment(const SimConfig& cfg) {
  check_config(cfg);
  Xoshiro256pp rng(cfg.seed);

  const double duration_ns = cfg.duration_s * 1e9;
  const double res = static_cast<double>(cfg.resolution_ps);
  const std::int64_t duration_ticks = std::llround(duration_ns * 1e3 / res);

  TimeTagStreamSet set;
  set.resolution_ps = cfg.resolution_ps;
  set.duration_s = cfg.duration_s;
  set.channels.assign(3, {});

  const double p_signal = cfg.signal_arm.transmission * cfg.signal_arm.detector.efficiency;
  const double p_idler = cfg.idler_arm.transmission * cfg.idler_arm.detector.efficiency;
  const double sigma_s = cfg.signal_arm.detector.jitter_sigma_ns;
  const double sigma_i = cfg.idler_arm.detector.jitter_sigma_ns;
  const double split = cfg.signal_arm.splitter.value_or(1.0);

  const double mu_ns = cfg.source.generation_rate_hz() * 1e-9;  // pairs per ns
  // Pair times are generated a little beyond both ends so that delays and
  // jitter see a stationary process across the acquisition boundaries.
  const double edge_ns = 200.0 + 20.0 * cfg.source.thermal_tau0_ns;

  const double expected_pairs = mu_ns * (duration_ns + 2 * edge_ns);
  set.channels[kApd1].reserve(static_cast<std::size_t>(expected_pairs * p_signal * split) + 1024);
  set.channels[kApd2].reserve(
      static_cast<std::size_t>(expected_pairs * p_signal * (1.0 - split)) + 1024);
  set.channels[kApd3].reserve(static_cast<std::size_t>(expected_pairs * p_idler) + 1024);

  auto emit = [&](std::size_t channel, double t_ns) {
    const std::int64_t tick = std::llround(t_ns * 1e3 / res);
    if (tick >= 0 && tick < duration_ticks) set.channels[channel].push_back(tick);
  };

  auto process_pair = [&](double t_ns) {
    const double delay = sample_pair_delay(cfg.source, rng);
    if (rng.uniform() < p_idler) {
      emit(kApd3, sigma_i > 0.0 ? t_ns + sigma_i * rng.normal() : t_ns);
    }
    if (rng.uniform() < p_signal) {
      double t_s = t_ns + delay;
      if (sigma_s > 0.0) t_s += sigma_s * rng.normal();
      emit(cfg.signal_arm.splitter && rng.uniform() >= split ? kApd2 : kApd1, t_s);
    }
  };

  if (mu_ns > 0.0) {
    if (!cfg.source.thermal_bunching) {
      const double mean_gap = 1.0 / mu_ns;
      for (double t = -edge_ns + rng.exponential(mean_gap); t < duration_ns + edge_ns;
           t += rng.exponential(mean_gap)) {
        process_pair(t);
      }
    } else {
      // Cluster construction for single-mode thermal statistics: parents are
      // Poisson; a parent emits either one pair or a correlated burst of two,
      // each displaced by an independent Exp(tau0 / 2). With q = R P tau0 the
      // rates mu (1 - q) of singles and mu q / 2 of bursts give an emission
      // autocorrelation of exactly 1 + exp(-2|tau|/tau0) at total rate mu.
      const double q = mu_ns * cfg.source.thermal_tau0_ns;
      const double parent_rate = mu_ns * (1.0 - 0.5 * q);
      const double p_burst = (0.5 * mu_ns * q) / parent_rate;
      const double offset_mean = 0.5 * cfg.source.thermal_tau0_ns;
      const double mean_gap = 1.0 / parent_rate;
      for (double t = -edge_ns + rng.exponential(mean_gap); t < duration_ns + edge_ns;
           t += rng.exponential(mean_gap)) {
        if (rng.uniform() < p_burst) {
          process_pair(t + rng.exponential(offset_mean));
          process_pair(t + rng.exponential(offset_mean));
        } else {
          process_pair(t + rng.exponential(offset_mean));
        }
      }
    }
  }

  // Dark counts: plain Poisson per detector, no jitter (they originate in the
  // detector itself).
  const double darks[3] = {cfg.signal_arm.detector.dark_rate_hz,
                           cfg.signal_arm.detector.dark_rate_hz,
                           cfg.idler_arm.detector.dark_rate_hz};
  for (std::size_t c = 0; c < 3; ++c) {
    if (darks[c] <= 0.0) continue;
    const double mean_gap = 1e9 / darks[c];
    for (double t = rng.exponential(mean_gap); t < duration_ns; t += rng.exponential(mean_gap)) {
      emit(c, t);
    }
  }

  const double dead_ns[3] = {cfg.signal_arm.detector.dead_time_ns,
                             cfg.signal_arm.detector.dead_time_ns,
                             cfg.idler_arm.detector.dead_time_ns};
  for (std::size_t c = 0; c < 3; ++c) {
    auto& ch = set.channels[c];
    std::sort(ch.begin(), ch.end());
    const std::int64_t dead_ticks = std::llround(dead_ns[c] * 1e3 / res);
    if (dead_ticks > 0 && !ch.empty()) {
      std::size_t kept = 1;
      std::int64_t last = ch[0];
      for (std::size_t i = 1; i < ch.size(); ++i) {
        if (ch[i] - last >= dead_ticks) {
          ch[kept++] = ch[i];
          last = ch[i];
        }
      }
      ch.resize(kept);
    }
  }

  set.metadata = {{"generator", "spdclab simulator"},
                  {"rng", kRngAlgorithm},
                  {"seed", cfg.seed},
                  {"resolution_ps", cfg.resolution_ps},
                  {"source",
                   {{"pair_rate_per_s_mw", cfg.source.pair_rate_per_s_mw},
                    {"pump_power_mw", cfg.source.pump_power_mw},
                    {"tau_lead_ns", cfg.source.tau_lead_ns},
                    {"tau_trail_ns", cfg.source.tau_trail_ns},
                    {"thermal_bunching", cfg.source.thermal_bunching},
                    {"thermal_tau0_ns", cfg.source.thermal_tau0_ns}}},
                  {"signal_arm", arm_json(cfg.signal_arm)},
                  {"idler_arm", arm_json(cfg.idler_arm)},
                  {"channels", {"signal APD1", "signal APD2", "idler APD3"}}};
  return set;
}

TimeTagStreamSet simulate_experiment(const SourceParams& source, const ArmParams& signal_arm,
                                     const ArmParams& idler_arm, double duration_s,
                                     std::uint64_t seed) {
  SimConfig cfg;
  cfg.source = source;
  cfg.signal_arm = signal_arm;
  cfg.idler_arm = idler_arm;
  cfg.duration_s = duration_s;
  cfg.seed = seed;
  return simulate_experiment(cfg);
}

std::vector<TimeTagStreamSet> simulate_sweep(const SimConfig& base,
                                             const std::vector<double>& rate_grid_hz,
                                             double duration_s, std::uint64_t seed) {
  if (rate_grid_hz.empty()) throw std::invalid_argument("simulate_sweep: empty rate grid");
  std::vector<TimeTagStreamSet> out;
  out.reserve(rate_grid_hz.size());
  for (std::size_t i = 0; i < rate_grid_hz.size(); ++i) {
    SimConfig cfg = base;
    cfg.source.pair_rate_per_s_mw = rate_grid_hz[i];
    cfg.source.pump_power_mw = 1.0;
    cfg.duration_s = duration_s;
    cfg.seed = sweep_point_seed(seed, i);
    out.push_back(simulate_experiment(cfg));
  }
  return out;
}

std::vector<SweepPoint> run_rate_sweep(const SimConfig& base,
                                       const std::vector<double>& rate_grid_hz,
                                       double duration_s, std::uint64_t seed,
                                       double window_ns, double offset_ns) {
  if (rate_grid_hz.empty()) throw std::invalid_argument("run_rate_sweep: empty rate grid");
  std::vector<SweepPoint> out;
  out.reserve(rate_grid_hz.size());
  for (std::size_t i = 0; i < rate_grid_hz.size(); ++i) {
    SimConfig cfg = base;
    cfg.source.pair_rate_per_s_mw = rate_grid_hz[i];
    cfg.source.pump_power_mw = 1.0;
    cfg.duration_s = duration_s;
    cfg.seed = sweep_point_seed(seed, i);
    const TimeTagStreamSet set = simulate_experiment(cfg);

    SweepPoint point;
    point.rate_pairs_per_s = rate_grid_hz[i];
    point.eq1_prediction =
        heralded_g2_prediction({rate_grid_hz[i], 1.0, window_ns});
    point.heralded = heralded_g2c(set.channel(kApd3), set.channel(kApd1),
                                  set.channel(kApd2), set.resolution_ps,
                                  std::llround(window_ns * 1e3),
                                  std::llround(offset_ns * 1e3));
    out.push_back(point);
  }
  return out;
}

}  // namespace spdc
