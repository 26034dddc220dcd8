//
// spdclab: simulate and analyze time-tagged photon-pair detection streams of
// a cavity-enhanced narrow-band SPDC source, and evaluate the corresponding
// closed-form models.
//
// Exit codes: 0 success, 2 usage/configuration error, 3 data error. Errors
// are reported as a one-line JSON record on stderr.
//

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "spdclab/cluster_spectrum.hpp"
#include "spdclab/correlator.hpp"
#include "spdclab/errors.hpp"
#include "spdclab/lineshape.hpp"
#include "spdclab/pair_model.hpp"
#include "spdclab/simulator.hpp"
#include "spdclab/tagio.hpp"

namespace {

using nlohmann::json;

// Thrown for configuration-level problems (exit code 2).
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct RunConfig {
  spdc::SimConfig sim = spdc::reference_config();
  spdc::CombSpec comb;
};

void reject_unknown(const json& obj, std::initializer_list<const char*> known,
                    const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    if (!ok) throw ConfigError("unknown config key '" + key + "' in " + where);
  }
}

double get_num(const json& obj, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number()) throw ConfigError(std::string("config key '") + key + "' must be a number");
  return obj[key].get<double>();
}

void parse_detector(const json& j, spdc::DetectorParams& d, const std::string& where) {
  reject_unknown(j, {"efficiency", "jitter_sigma_ns", "dead_time_ns", "dark_rate_hz"}, where);
  d.efficiency = get_num(j, "efficiency", d.efficiency);
  d.jitter_sigma_ns = get_num(j, "jitter_sigma_ns", d.jitter_sigma_ns);
  d.dead_time_ns = get_num(j, "dead_time_ns", d.dead_time_ns);
  d.dark_rate_hz = get_num(j, "dark_rate_hz", d.dark_rate_hz);
}

void parse_arm(const json& j, spdc::ArmParams& a, const std::string& where) {
  reject_unknown(j, {"transmission", "splitter", "detector"}, where);
  a.transmission = get_num(j, "transmission", a.transmission);
  if (j.contains("splitter")) {
    if (j["splitter"].is_null())
      a.splitter.reset();
    else
      a.splitter = get_num(j, "splitter", 0.5);
  }
  if (j.contains("detector")) parse_detector(j["detector"], a.detector, where + ".detector");
}

RunConfig load_config(const std::string& path) {
  RunConfig cfg;
  if (path.empty()) return cfg;
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded()) throw ConfigError("config file is not valid JSON: " + path);
  if (!j.is_object()) throw ConfigError("config root must be a JSON object");

  reject_unknown(j, {"source", "signal_arm", "idler_arm", "comb", "duration_s", "seed",
                     "resolution_ps"},
                 "config");
  if (j.contains("source")) {
    const json& s = j["source"];
    reject_unknown(s,
                   {"pair_rate_per_s_mw", "pump_power_mw", "tau_lead_ns", "tau_trail_ns",
                    "thermal_bunching", "thermal_tau0_ns"},
                   "source");
    cfg.sim.source.pair_rate_per_s_mw =
        get_num(s, "pair_rate_per_s_mw", cfg.sim.source.pair_rate_per_s_mw);
    cfg.sim.source.pump_power_mw = get_num(s, "pump_power_mw", cfg.sim.source.pump_power_mw);
    cfg.sim.source.tau_lead_ns = get_num(s, "tau_lead_ns", cfg.sim.source.tau_lead_ns);
    cfg.sim.source.tau_trail_ns = get_num(s, "tau_trail_ns", cfg.sim.source.tau_trail_ns);
    cfg.sim.source.thermal_tau0_ns = get_num(s, "thermal_tau0_ns", cfg.sim.source.thermal_tau0_ns);
    if (s.contains("thermal_bunching")) {
      if (!s["thermal_bunching"].is_boolean())
        throw ConfigError("source.thermal_bunching must be a boolean");
      cfg.sim.source.thermal_bunching = s["thermal_bunching"].get<bool>();
    }
  }
  if (j.contains("signal_arm")) parse_arm(j["signal_arm"], cfg.sim.signal_arm, "signal_arm");
  if (j.contains("idler_arm")) parse_arm(j["idler_arm"], cfg.sim.idler_arm, "idler_arm");
  if (j.contains("comb")) {
    const json& c = j["comb"];
    reject_unknown(c,
                   {"fsr_s_ghz", "fsr_i_ghz", "linewidth_s_mhz", "linewidth_i_mhz",
                    "offset_s_mhz", "offset_i_mhz", "doublet_split_mhz"},
                   "comb");
    cfg.comb.fsr_s_ghz = get_num(c, "fsr_s_ghz", cfg.comb.fsr_s_ghz);
    cfg.comb.fsr_i_ghz = get_num(c, "fsr_i_ghz", cfg.comb.fsr_i_ghz);
    cfg.comb.linewidth_s_mhz = get_num(c, "linewidth_s_mhz", cfg.comb.linewidth_s_mhz);
    cfg.comb.linewidth_i_mhz = get_num(c, "linewidth_i_mhz", cfg.comb.linewidth_i_mhz);
    cfg.comb.offset_s_mhz = get_num(c, "offset_s_mhz", cfg.comb.offset_s_mhz);
    cfg.comb.offset_i_mhz = get_num(c, "offset_i_mhz", cfg.comb.offset_i_mhz);
    if (c.contains("doublet_split_mhz") && !c["doublet_split_mhz"].is_null())
      cfg.comb.doublet_split_mhz = get_num(c, "doublet_split_mhz", 0.0);
  }
  cfg.sim.duration_s = get_num(j, "duration_s", cfg.sim.duration_s);
  if (j.contains("seed")) {
    if (!j["seed"].is_number_integer() && !j["seed"].is_number_unsigned())
      throw ConfigError("seed must be an integer");
    cfg.sim.seed = j["seed"].get<std::uint64_t>();
  }
  cfg.sim.resolution_ps =
      static_cast<std::int64_t>(get_num(j, "resolution_ps", static_cast<double>(cfg.sim.resolution_ps)));
  return cfg;
}

json herald_json(const spdc::HeraldedG2Result& r) {
  return {{"p_s1", r.p_s1},
          {"p_s2", r.p_s2},
          {"p_d", r.p_d},
          {"g2c", r.g2c},
          {"n_heralds", r.n_heralds},
          {"stat_error", r.stat_error},
          {"window_ns", static_cast<double>(r.window_ps) * 1e-3},
          {"offset_ns", static_cast<double>(r.offset_ps) * 1e-3}};
}

json summary_json(const spdc::StreamSummary& s) {
  return {{"rates",
           {{"n_s_hz", s.rates.n_s_hz},
            {"n_i_hz", s.rates.n_i_hz},
            {"pair_rate_hz", s.rates.pair_rate_hz},
            {"duration_s", s.rates.duration_s}}},
          {"efficiencies",
           {{"eta_s", s.efficiencies.eta_s},
            {"eta_i", s.efficiencies.eta_i},
            {"eta_heralded", s.efficiencies.eta_heralded},
            {"pair_rate_per_s_mw", s.efficiencies.pair_rate_per_s_mw},
            {"detected_pairs_per_s_mw", s.efficiencies.detected_pairs_per_s_mw}}},
          {"window_ns", s.window_ns},
          {"offset_ns", s.offset_ns}};
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open output file " + path);
  out << text;
  if (!out.flush()) throw std::runtime_error("write failed for " + path);
}

std::int64_t auto_offset_ps(std::span<const std::int64_t> a, std::span<const std::int64_t> b,
                            std::int64_t resolution_ps, double duration_s) {
  if (a.empty() || b.empty()) return 0;
  const auto hist =
      spdc::cross_correlation_histogram(a, b, resolution_ps, duration_s, 162, 50'000);
  return spdc::peak_lag_ps(hist);
}

int run(int argc, char** argv) {
  CLI::App app{"cavity-enhanced SPDC pair source: simulation, correlation analysis, models"};
  app.require_subcommand(1);
  argv = app.ensure_utf8(argv);

  // --- simulate ---------------------------------------------------------
  auto* sim_cmd = app.add_subcommand("simulate", "run the Monte Carlo source model, write PTT1");
  std::string sim_config, sim_out;
  double sim_duration = -1.0;
  std::int64_t sim_seed = -1;
  sim_cmd->add_option("--config", sim_config, "JSON run configuration");
  sim_cmd->add_option("--out", sim_out, "output .ptt1 path")->required();
  sim_cmd->add_option("--duration-s", sim_duration, "override simulated duration");
  sim_cmd->add_option("--seed", sim_seed, "override RNG seed");

  // --- correlate --------------------------------------------------------
  auto* corr_cmd = app.add_subcommand("correlate", "cross/auto-correlation histogram and g2 curve");
  std::string corr_in, corr_out;
  std::size_t corr_a = 2, corr_b = 0, corr_chunks = 1;
  std::int64_t corr_bin_ps = 162;
  double corr_max_lag_ns = 50.0;
  corr_cmd->add_option("--in", corr_in, "input .ptt1")->required();
  corr_cmd->add_option("--a", corr_a, "first channel (lags are t_b - t_a)")->required();
  corr_cmd->add_option("--b", corr_b, "second channel")->required();
  corr_cmd->add_option("--bin-ps", corr_bin_ps, "bin width in ps");
  corr_cmd->add_option("--max-lag-ns", corr_max_lag_ns, "maximum |lag| in ns");
  corr_cmd->add_option("--chunks", corr_chunks, "number of parallel chunks");
  corr_cmd->add_option("--out", corr_out, "output CSV (lag_ps,counts,g2,g2_err)")->required();

  // --- herald-g2 --------------------------------------------------------
  auto* herald_cmd = app.add_subcommand("herald-g2", "conditional autocorrelation g2_c");
  std::string herald_in;
  std::size_t herald_ch = 2, s1_ch = 0, s2_ch = 1;
  double herald_window_ns = 8.0;
  std::optional<double> herald_offset_ns;
  herald_cmd->add_option("--in", herald_in, "input .ptt1")->required();
  herald_cmd->add_option("--herald", herald_ch, "herald channel");
  herald_cmd->add_option("--s1", s1_ch, "first HBT channel");
  herald_cmd->add_option("--s2", s2_ch, "second HBT channel");
  herald_cmd->add_option("--window-ns", herald_window_ns, "coincidence window");
  herald_cmd->add_option("--offset-ns", herald_offset_ns,
                         "window center relative to herald (default: correlation peak)");

  // --- summary ----------------------------------------------------------
  auto* sum_cmd = app.add_subcommand("summary", "singles/pair rates and efficiency algebra");
  std::string sum_in;
  double sum_eta_det = 0.60, sum_pump = 1.2, sum_window_ns = 8.0;
  std::optional<double> sum_offset_ns;
  std::vector<std::size_t> sum_signal = {0, 1};
  std::size_t sum_idler = 2;
  sum_cmd->add_option("--in", sum_in, "input .ptt1")->required();
  sum_cmd->add_option("--eta-det", sum_eta_det, "detector efficiency for heralding correction");
  sum_cmd->add_option("--pump-mw", sum_pump, "pump power in mW");
  sum_cmd->add_option("--signal-channels", sum_signal, "signal channel list")->delimiter(',');
  sum_cmd->add_option("--idler-channel", sum_idler, "idler channel");
  sum_cmd->add_option("--window-ns", sum_window_ns, "coincidence window");
  sum_cmd->add_option("--offset-ns", sum_offset_ns, "window center (default: correlation peak)");

  // --- sweep ------------------------------------------------------------
  auto* sweep_cmd = app.add_subcommand("sweep", "heralded g2_c vs pair generation rate");
  std::string sweep_config, sweep_dir;
  std::vector<double> sweep_rates = {5e4, 1e5, 2.5e5, 5e5, 1e6};
  double sweep_duration = 60.0, sweep_window_ns = 8.0, sweep_offset_ns = 0.0;
  std::int64_t sweep_seed = -1;
  bool sweep_save_streams = false;
  sweep_cmd->add_option("--config", sweep_config, "JSON run configuration");
  sweep_cmd->add_option("--rates", sweep_rates, "R*P grid in pairs/s")->delimiter(',');
  sweep_cmd->add_option("--out-dir", sweep_dir, "output directory")->required();
  sweep_cmd->add_option("--duration-s", sweep_duration, "simulated duration per point");
  sweep_cmd->add_option("--window-ns", sweep_window_ns, "coincidence window");
  sweep_cmd->add_option("--offset-ns", sweep_offset_ns, "window center relative to herald");
  sweep_cmd->add_option("--seed", sweep_seed, "override RNG seed");
  sweep_cmd->add_flag("--save-streams", sweep_save_streams, "also write per-point .ptt1 files");

  // --- cluster ----------------------------------------------------------
  auto* cluster_cmd = app.add_subcommand("cluster", "emission-line cluster spectrum");
  std::string cluster_config, cluster_out;
  double cluster_span = 40.0;
  cluster_cmd->add_option("--config", cluster_config, "JSON run configuration");
  cluster_cmd->add_option("--span-ghz", cluster_span, "signal detuning span");
  cluster_cmd->add_option("--out", cluster_out, "output CSV (detuning_GHz,weight)")->required();

  // --- export -----------------------------------------------------------
  auto* export_cmd = app.add_subcommand("export", "dump a .ptt1 file as CSV");
  std::string export_in, export_out;
  export_cmd->add_option("--in", export_in, "input .ptt1")->required();
  export_cmd->add_option("--out", export_out, "output CSV")->required();

  // --- model ------------------------------------------------------------
  auto* model_cmd = app.add_subcommand("model", "evaluate closed-form models");
  model_cmd->require_subcommand(1);

  auto* eq1 = model_cmd->add_subcommand("eq1", "heralded g2_c prediction 2p - p^2");
  double eq1_rp = 0.0, eq1_pump = 1.0, eq1_window = 8.0;
  eq1->add_option("--rp", eq1_rp, "pair generation rate R*P in pairs/s")->required();
  eq1->add_option("--pump-mw", eq1_pump, "pump power (R*P is then rp*pump)");
  eq1->add_option("--window-ns", eq1_window, "coincidence window");

  auto* eq2 = model_cmd->add_subcommand("eq2", "Bayes relation g2_ss g2_ii / g2_si");
  double eq2_ss = 1.0, eq2_ii = 1.0, eq2_si = 1.0;
  eq2->add_option("--g2ss", eq2_ss)->required();
  eq2->add_option("--g2ii", eq2_ii)->required();
  eq2->add_option("--g2si", eq2_si)->required();

  auto* cross = model_cmd->add_subcommand("cross", "predicted g2_si = g2_ii^2 / g2_c");
  double cross_ii = 1.338, cross_rp = 0.0, cross_pump = 1.0, cross_window = 8.0;
  cross->add_option("--g2ii", cross_ii);
  cross->add_option("--rp", cross_rp, "pair generation rate in pairs/s")->required();
  cross->add_option("--pump-mw", cross_pump);
  cross->add_option("--window-ns", cross_window);

  auto* lineshape = model_cmd->add_subcommand("lineshape", "thermal autocorrelation model");
  double ls_tau0 = 2.0, ls_sigma = 0.7304;
  std::optional<double> ls_tau, ls_window;
  lineshape->add_option("--tau0-ns", ls_tau0, "coherence time");
  lineshape->add_option("--sigma-ns", ls_sigma, "Gaussian IRF sigma");
  lineshape->add_option("--tau-ns", ls_tau, "evaluate g2 at this lag");
  lineshape->add_option("--window-ns", ls_window, "average g2 over +-window");

  auto* product = model_cmd->add_subcommand("product-fwhm", "effective width of a Lorentzian product");
  double prod_a = 226.0, prod_b = 274.0;
  product->add_option("--fwhm-a", prod_a)->required();
  product->add_option("--fwhm-b", prod_b)->required();

  auto* airy = model_cmd->add_subcommand("airy", "etalon Airy transmission");
  double airy_det = 0.0, airy_fsr = 12.8, airy_fwhm = 274.0;
  airy->add_option("--detuning-mhz", airy_det)->required();
  airy->add_option("--fsr-ghz", airy_fsr);
  airy->add_option("--fwhm-mhz", airy_fwhm);

  auto* filt = model_cmd->add_subcommand("filtered-fraction", "etalon-transmitted line fraction");
  double filt_src = 226.0, filt_fsr = 12.8, filt_fwhm = 274.0, filt_halfwin = 200.0;
  filt->add_option("--source-fwhm-mhz", filt_src);
  filt->add_option("--fsr-ghz", filt_fsr);
  filt->add_option("--fwhm-mhz", filt_fwhm);
  filt->add_option("--half-window-mhz", filt_halfwin);

  auto* eff = model_cmd->add_subcommand("efficiencies", "rate-to-efficiency algebra");
  double eff_ns = 0.0, eff_ni = 0.0, eff_r = 0.0, eff_det = 0.60, eff_pump = 1.2;
  eff->add_option("--ns", eff_ns, "signal singles rate /s")->required();
  eff->add_option("--ni", eff_ni, "idler singles rate /s")->required();
  eff->add_option("--r", eff_r, "pair rate /s")->required();
  eff->add_option("--eta-det", eff_det);
  eff->add_option("--pump-mw", eff_pump);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cerr << json{{"error", "usage"}, {"message", e.what()}}.dump() << "\n";
    return 2;
  }

  if (sim_cmd->parsed()) {
    RunConfig cfg = load_config(sim_config);
    if (sim_duration > 0.0) cfg.sim.duration_s = sim_duration;
    if (sim_seed >= 0) cfg.sim.seed = static_cast<std::uint64_t>(sim_seed);
    const spdc::TimeTagStreamSet set = spdc::simulate_experiment(cfg.sim);
    spdc::write_streams(sim_out, set);
    json counts = json::array();
    for (const auto& ch : set.channels) counts.push_back(ch.size());
    std::cout << json{{"out", sim_out},
                      {"duration_s", set.duration_s},
                      {"seed", cfg.sim.seed},
                      {"counts", counts}}
                     .dump()
              << "\n";
    return 0;
  }

  if (corr_cmd->parsed()) {
    const spdc::TimeTagStreamSet set = spdc::read_streams(corr_in);
    const auto a = set.channel(corr_a);
    const auto b = set.channel(corr_b);
    const auto max_lag_ps = static_cast<std::int64_t>(std::llround(corr_max_lag_ns * 1e3));
    const spdc::CorrelationHistogram hist =
        corr_a == corr_b
            ? spdc::autocorrelation_histogram(a, set.resolution_ps, set.duration_s,
                                              corr_bin_ps, max_lag_ps, corr_chunks)
            : spdc::cross_correlation_histogram(a, b, set.resolution_ps, set.duration_s,
                                                corr_bin_ps, max_lag_ps, corr_chunks);
    const spdc::G2Curve curve = spdc::normalize_g2(hist);
    std::string csv = "lag_ps,counts,g2,g2_err\n";
    for (int i = 0; i < hist.n_bins(); ++i) {
      csv += std::to_string(hist.bin_center_ps(i)) + ",";
      csv += std::to_string(hist.counts[static_cast<std::size_t>(i)]) + ",";
      csv += std::to_string(curve.g2[static_cast<std::size_t>(i)]) + ",";
      csv += std::to_string(curve.err[static_cast<std::size_t>(i)]) + "\n";
    }
    write_text_file(corr_out, csv);
    const std::int64_t peak = spdc::peak_lag_ps(hist);
    std::cout << json{{"out", corr_out},
                      {"n_a", hist.n_a},
                      {"n_b", hist.n_b},
                      {"duration_s", hist.duration_s},
                      {"bin_width_ps", hist.bin_width_ps},
                      {"n_bins", hist.n_bins()},
                      {"peak_lag_ps", peak}}
                     .dump()
              << "\n";
    return 0;
  }

  if (herald_cmd->parsed()) {
    const spdc::TimeTagStreamSet set = spdc::read_streams(herald_in);
    const auto herald = set.channel(herald_ch);
    const auto s1 = set.channel(s1_ch);
    const auto s2 = set.channel(s2_ch);
    std::int64_t offset_ps;
    if (herald_offset_ns) {
      offset_ps = std::llround(*herald_offset_ns * 1e3);
    } else {
      const std::vector<std::int64_t> merged = spdc::merge_channels(set, {s1_ch, s2_ch});
      offset_ps = auto_offset_ps(herald, merged, set.resolution_ps, set.duration_s);
    }
    const spdc::HeraldedG2Result r =
        spdc::heralded_g2c(herald, s1, s2, set.resolution_ps,
                           std::llround(herald_window_ns * 1e3), offset_ps);
    std::cout << herald_json(r).dump() << "\n";
    return 0;
  }

  if (sum_cmd->parsed()) {
    const spdc::TimeTagStreamSet set = spdc::read_streams(sum_in);
    spdc::SummaryOptions opts;
    opts.signal_channels = sum_signal;
    opts.idler_channel = sum_idler;
    opts.window_ns = sum_window_ns;
    opts.offset_ns = sum_offset_ns;
    const spdc::StreamSummary s = spdc::stream_summary(set, opts, sum_eta_det, sum_pump);
    std::cout << summary_json(s).dump() << "\n";
    return 0;
  }

  if (sweep_cmd->parsed()) {
    RunConfig cfg = load_config(sweep_config);
    if (sweep_seed >= 0) cfg.sim.seed = static_cast<std::uint64_t>(sweep_seed);
    if (sweep_rates.empty()) throw ConfigError("sweep: empty rate grid");
    std::filesystem::create_directories(sweep_dir);

    std::string csv = "rate_pairs_per_s,g2c,g2c_err,eq1_prediction\n";
    json points = json::array();
    for (std::size_t i = 0; i < sweep_rates.size(); ++i) {
      spdc::SimConfig point_cfg = cfg.sim;
      point_cfg.source.pair_rate_per_s_mw = sweep_rates[i];
      point_cfg.source.pump_power_mw = 1.0;
      point_cfg.duration_s = sweep_duration;
      point_cfg.seed = spdc::sweep_point_seed(cfg.sim.seed, i);
      const spdc::TimeTagStreamSet set = spdc::simulate_experiment(point_cfg);
      if (sweep_save_streams) {
        spdc::write_streams(sweep_dir + "/point_" + std::to_string(i) + ".ptt1", set);
      }
      const spdc::HeraldedG2Result r = spdc::heralded_g2c(
          set.channel(spdc::kApd3), set.channel(spdc::kApd1), set.channel(spdc::kApd2),
          set.resolution_ps, std::llround(sweep_window_ns * 1e3),
          std::llround(sweep_offset_ns * 1e3));
      const double eq1_value =
          spdc::heralded_g2_prediction({sweep_rates[i], 1.0, sweep_window_ns});
      char line[160];
      std::snprintf(line, sizeof line, "%.10g,%.10g,%.10g,%.10g\n", sweep_rates[i], r.g2c,
                    r.stat_error, eq1_value);
      csv += line;
      json rec = herald_json(r);
      rec["rate_pairs_per_s"] = sweep_rates[i];
      rec["eq1_prediction"] = eq1_value;
      points.push_back(rec);
      write_text_file(sweep_dir + "/point_" + std::to_string(i) + ".json", rec.dump() + "\n");
    }
    write_text_file(sweep_dir + "/sweep.csv", csv);
    std::cout << json{{"out_dir", sweep_dir}, {"points", points}}.dump() << "\n";
    return 0;
  }

  if (cluster_cmd->parsed()) {
    RunConfig cfg = load_config(cluster_config);
    const auto lines = spdc::emission_lines(cfg.comb, cluster_span);
    if (cfg.comb.fsr_s_ghz == cfg.comb.fsr_i_ghz)
      std::cerr << "warning: equal signal/idler FSRs, degenerate cluster\n";
    std::string csv = "detuning_GHz,weight\n";
    for (const auto& line : lines) {
      char row[80];
      std::snprintf(row, sizeof row, "%.9g,%.9g\n", line.detuning_ghz, line.weight);
      csv += row;
    }
    write_text_file(cluster_out, csv);
    json out = {{"out", cluster_out},
                {"n_lines", lines.size()},
                {"central_fraction", spdc::central_fraction(lines, cluster_span)}};
    if (cfg.comb.fsr_s_ghz != cfg.comb.fsr_i_ghz)
      out["cluster_spacing_ghz"] =
          spdc::cluster_spacing_ghz(cfg.comb.fsr_s_ghz, cfg.comb.fsr_i_ghz);
    std::cout << out.dump() << "\n";
    return 0;
  }

  if (export_cmd->parsed()) {
    const spdc::TimeTagStreamSet set = spdc::read_streams(export_in);
    spdc::export_csv(set, export_out);
    std::cout << json{{"out", export_out}, {"n_records", set.total_tags()}}.dump() << "\n";
    return 0;
  }

  if (model_cmd->parsed()) {
    json out;
    if (eq1->parsed()) {
      const spdc::PairSourceOperatingPoint op{eq1_rp, eq1_pump, eq1_window};
      out = {{"g2c", spdc::heralded_g2_prediction(op)}, {"p", op.pairs_per_window()}};
    } else if (eq2->parsed()) {
      out = {{"g2c", spdc::bayes_g2c(eq2_ss, eq2_ii, eq2_si)}};
    } else if (cross->parsed()) {
      out = {{"g2_si",
              spdc::predicted_cross_corr(cross_ii, {cross_rp, cross_pump, cross_window})}};
    } else if (lineshape->parsed()) {
      out = {{"tau0_ns", ls_tau0}, {"sigma_ns", ls_sigma}};
      if (ls_tau)
        out["g2_tau"] = spdc::irf_convolved_autocorr(*ls_tau, ls_tau0, {ls_sigma});
      if (ls_window)
        out["g2_window"] = spdc::window_averaged_g2(ls_tau0, {ls_sigma}, *ls_window);
    } else if (product->parsed()) {
      const double w = spdc::product_line_fwhm(prod_a, prod_b);
      out = {{"fwhm_mhz", w}, {"coherence_time_ns", spdc::coherence_time_ns(w)}};
    } else if (airy->parsed()) {
      out = {{"transmission", spdc::airy_transmission(airy_det, {airy_fsr, airy_fwhm})}};
    } else if (filt->parsed()) {
      out = {{"fraction", spdc::filtered_fraction({0.0, filt_src}, {filt_fsr, filt_fwhm},
                                                  filt_halfwin)}};
    } else if (eff->parsed()) {
      const spdc::EfficiencySummary e =
          spdc::efficiencies_from_rates({eff_ns, eff_ni, eff_r, 0.0}, eff_det, eff_pump);
      out = {{"eta_s", e.eta_s},
             {"eta_i", e.eta_i},
             {"eta_heralded", e.eta_heralded},
             {"pair_rate_per_s_mw", e.pair_rate_per_s_mw},
             {"detected_pairs_per_s_mw", e.detected_pairs_per_s_mw}};
    }
    std::cout << out.dump() << "\n";
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ConfigError& e) {
    std::cerr << json{{"error", "config"}, {"message", e.what()}}.dump() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << json{{"error", "config"}, {"message", e.what()}}.dump() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << json{{"error", "data"}, {"message", e.what()}}.dump() << "\n";
    return 3;
  }
}
