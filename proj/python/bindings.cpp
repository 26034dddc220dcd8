//
// Python bindings for the spdclab core: lineshape math, pair-source models,
// cluster spectrum, the Monte Carlo simulator, the correlator, and PTT1
// file IO.
//

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "spdclab/cluster_spectrum.hpp"
#include "spdclab/correlator.hpp"
#include "spdclab/lineshape.hpp"
#include "spdclab/pair_model.hpp"
#include "spdclab/simulator.hpp"
#include "spdclab/tagio.hpp"

namespace py = pybind11;
using namespace spdc;

PYBIND11_MODULE(_spdclab, m) {
  m.doc() = "Cavity-enhanced SPDC pair source: simulation, correlation analysis, models";

  // lineshape
  m.def("lorentzian_weight", &lorentzian_weight, py::arg("detuning_mhz"), py::arg("fwhm_mhz"));
  m.def("coherence_time_ns", &coherence_time_ns, py::arg("fwhm_mhz"));
  m.def("product_line_fwhm", &product_line_fwhm, py::arg("fwhm_a_mhz"), py::arg("fwhm_b_mhz"));
  m.def("ideal_thermal_autocorr", &ideal_thermal_autocorr, py::arg("tau_ns"), py::arg("tau0_ns"));
  m.def("multimode_autocorr_peak", &multimode_autocorr_peak, py::arg("n_modes"));
  m.def(
      "irf_convolved_autocorr",
      [](double tau, double tau0, double sigma) {
        return irf_convolved_autocorr(tau, tau0, {sigma});
      },
      py::arg("tau_ns"), py::arg("tau0_ns"), py::arg("sigma_ns"));
  m.def(
      "window_averaged_g2",
      [](double tau0, double sigma, double half_window) {
        return window_averaged_g2(tau0, {sigma}, half_window);
      },
      py::arg("tau0_ns"), py::arg("sigma_ns"), py::arg("half_window_ns"));
  m.def(
      "airy_transmission",
      [](double detuning, double fsr_ghz, double fwhm_mhz) {
        return airy_transmission(detuning, {fsr_ghz, fwhm_mhz});
      },
      py::arg("detuning_mhz"), py::arg("fsr_ghz"), py::arg("fwhm_mhz"));
  m.def(
      "filtered_fraction",
      [](double source_fwhm, double fsr_ghz, double fwhm_mhz, double half_window) {
        return filtered_fraction({0.0, source_fwhm}, {fsr_ghz, fwhm_mhz}, half_window);
      },
      py::arg("source_fwhm_mhz"), py::arg("fsr_ghz"), py::arg("fwhm_mhz"),
      py::arg("half_window_mhz"));
  m.def("gaussian_fwhm_to_sigma", &gaussian_fwhm_to_sigma, py::arg("fwhm"));

  // pair model
  m.def(
      "heralded_g2_prediction",
      [](double rp, double window_ns) {
        return heralded_g2_prediction({rp, 1.0, window_ns});
      },
      py::arg("rate_pairs_per_s"), py::arg("window_ns"));
  m.def("bayes_g2c", &bayes_g2c, py::arg("g2_ss"), py::arg("g2_ii"), py::arg("g2_si"));
  m.def(
      "predicted_cross_corr",
      [](double g2_ii, double rp, double window_ns) {
        return predicted_cross_corr(g2_ii, {rp, 1.0, window_ns});
      },
      py::arg("g2_ii"), py::arg("rate_pairs_per_s"), py::arg("window_ns"));
  m.def(
      "efficiencies_from_rates",
      [](double n_s, double n_i, double r, double eta_det, double pump_mw) {
        const EfficiencySummary e = efficiencies_from_rates({n_s, n_i, r, 0.0}, eta_det, pump_mw);
        return py::dict(
            py::arg("eta_s") = e.eta_s, py::arg("eta_i") = e.eta_i,
            py::arg("eta_heralded") = e.eta_heralded,
            py::arg("pair_rate_per_s_mw") = e.pair_rate_per_s_mw,
            py::arg("detected_pairs_per_s_mw") = e.detected_pairs_per_s_mw);
      },
      py::arg("n_s_hz"), py::arg("n_i_hz"), py::arg("pair_rate_hz"), py::arg("eta_det"),
      py::arg("pump_power_mw"));

  // cluster spectrum
  py::class_<ClusterLine>(m, "ClusterLine")
      .def_readonly("detuning_ghz", &ClusterLine::detuning_ghz)
      .def_readonly("weight", &ClusterLine::weight);
  py::class_<CombSpec>(m, "CombSpec")
      .def(py::init<>())
      .def_readwrite("fsr_s_ghz", &CombSpec::fsr_s_ghz)
      .def_readwrite("fsr_i_ghz", &CombSpec::fsr_i_ghz)
      .def_readwrite("linewidth_s_mhz", &CombSpec::linewidth_s_mhz)
      .def_readwrite("linewidth_i_mhz", &CombSpec::linewidth_i_mhz)
      .def_readwrite("offset_s_mhz", &CombSpec::offset_s_mhz)
      .def_readwrite("offset_i_mhz", &CombSpec::offset_i_mhz)
      .def_readwrite("doublet_split_mhz", &CombSpec::doublet_split_mhz);
  m.def("emission_lines", &emission_lines, py::arg("comb"), py::arg("span_ghz"));
  m.def("cluster_spacing_ghz", &cluster_spacing_ghz, py::arg("fsr_s_ghz"), py::arg("fsr_i_ghz"));
  m.def("central_fraction", &central_fraction, py::arg("lines"), py::arg("window_ghz"));
  m.def("strain_detuning_ghz", &strain_detuning_ghz, py::arg("voltage_v"),
        py::arg("contact_voltage_v"), py::arg("slope_ghz_per_v"),
        py::arg("max_range_ghz") = 3.0);
  m.def("drift_detuning_mhz", &drift_detuning_mhz, py::arg("elapsed_h"),
        py::arg("rate_mhz_per_h"));

  // simulator
  py::class_<DetectorParams>(m, "DetectorParams")
      .def(py::init<>())
      .def_readwrite("efficiency", &DetectorParams::efficiency)
      .def_readwrite("jitter_sigma_ns", &DetectorParams::jitter_sigma_ns)
      .def_readwrite("dead_time_ns", &DetectorParams::dead_time_ns)
      .def_readwrite("dark_rate_hz", &DetectorParams::dark_rate_hz);
  py::class_<ArmParams>(m, "ArmParams")
      .def(py::init<>())
      .def_readwrite("transmission", &ArmParams::transmission)
      .def_readwrite("detector", &ArmParams::detector)
      .def_readwrite("splitter", &ArmParams::splitter);
  py::class_<SourceParams>(m, "SourceParams")
      .def(py::init<>())
      .def_readwrite("pair_rate_per_s_mw", &SourceParams::pair_rate_per_s_mw)
      .def_readwrite("pump_power_mw", &SourceParams::pump_power_mw)
      .def_readwrite("tau_lead_ns", &SourceParams::tau_lead_ns)
      .def_readwrite("tau_trail_ns", &SourceParams::tau_trail_ns)
      .def_readwrite("thermal_bunching", &SourceParams::thermal_bunching)
      .def_readwrite("thermal_tau0_ns", &SourceParams::thermal_tau0_ns);
  py::class_<SimConfig>(m, "SimConfig")
      .def(py::init<>())
      .def_readwrite("source", &SimConfig::source)
      .def_readwrite("signal_arm", &SimConfig::signal_arm)
      .def_readwrite("idler_arm", &SimConfig::idler_arm)
      .def_readwrite("duration_s", &SimConfig::duration_s)
      .def_readwrite("seed", &SimConfig::seed)
      .def_readwrite("resolution_ps", &SimConfig::resolution_ps);
  py::class_<TimeTagStreamSet>(m, "TimeTagStreamSet")
      .def(py::init<>())
      .def_readwrite("resolution_ps", &TimeTagStreamSet::resolution_ps)
      .def_readwrite("duration_s", &TimeTagStreamSet::duration_s)
      .def_readwrite("channels", &TimeTagStreamSet::channels)
      .def_property(
          "metadata_json",
          [](const TimeTagStreamSet& s) { return s.metadata.dump(); },
          [](TimeTagStreamSet& s, const std::string& text) {
            s.metadata = nlohmann::json::parse(text);
          })
      .def("total_tags", &TimeTagStreamSet::total_tags);
  m.def("reference_config", &reference_config);
  m.def("simulate_experiment", py::overload_cast<const SimConfig&>(&simulate_experiment),
        py::arg("config"));

  // correlator
  py::class_<CorrelationHistogram>(m, "CorrelationHistogram")
      .def_readonly("bin_width_ps", &CorrelationHistogram::bin_width_ps)
      .def_readonly("half_bins", &CorrelationHistogram::half_bins)
      .def_readonly("duration_s", &CorrelationHistogram::duration_s)
      .def_readonly("n_a", &CorrelationHistogram::n_a)
      .def_readonly("n_b", &CorrelationHistogram::n_b)
      .def_readonly("counts", &CorrelationHistogram::counts)
      .def("n_bins", &CorrelationHistogram::n_bins)
      .def("bin_center_ps", &CorrelationHistogram::bin_center_ps)
      .def("max_lag_ps", &CorrelationHistogram::max_lag_ps);
  py::class_<HeraldedG2Result>(m, "HeraldedG2Result")
      .def_readonly("p_s1", &HeraldedG2Result::p_s1)
      .def_readonly("p_s2", &HeraldedG2Result::p_s2)
      .def_readonly("p_d", &HeraldedG2Result::p_d)
      .def_readonly("g2c", &HeraldedG2Result::g2c)
      .def_readonly("n_heralds", &HeraldedG2Result::n_heralds)
      .def_readonly("stat_error", &HeraldedG2Result::stat_error)
      .def_readonly("window_ps", &HeraldedG2Result::window_ps)
      .def_readonly("offset_ps", &HeraldedG2Result::offset_ps);
  m.def(
      "cross_correlation_histogram",
      [](const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b,
         std::int64_t resolution_ps, double duration_s, std::int64_t bin_width_ps,
         std::int64_t max_lag_ps) {
        return cross_correlation_histogram(a, b, resolution_ps, duration_s, bin_width_ps,
                                           max_lag_ps);
      },
      py::arg("a"), py::arg("b"), py::arg("resolution_ps"), py::arg("duration_s"),
      py::arg("bin_width_ps"), py::arg("max_lag_ps"));
  m.def(
      "normalize_g2",
      [](const CorrelationHistogram& hist) {
        const G2Curve curve = normalize_g2(hist);
        return py::make_tuple(curve.lag_ns, curve.g2, curve.err);
      },
      py::arg("histogram"));
  m.def(
      "heralded_g2c",
      [](const std::vector<std::int64_t>& herald, const std::vector<std::int64_t>& s1,
         const std::vector<std::int64_t>& s2, std::int64_t resolution_ps,
         std::int64_t window_ps, std::int64_t offset_ps) {
        return heralded_g2c(herald, s1, s2, resolution_ps, window_ps, offset_ps);
      },
      py::arg("herald"), py::arg("s1"), py::arg("s2"), py::arg("resolution_ps"),
      py::arg("window_ps"), py::arg("offset_ps") = 0);
  m.def(
      "coincidences",
      [](const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b,
         std::int64_t resolution_ps, double duration_s, std::int64_t window_ps,
         std::int64_t offset_ps) {
        const CoincidenceResult r =
            coincidences(a, b, resolution_ps, duration_s, window_ps, offset_ps);
        return py::dict(py::arg("count") = r.count, py::arg("rate_hz") = r.rate_hz,
                        py::arg("window_ps") = r.window_ps,
                        py::arg("offset_ps") = r.offset_ps);
      },
      py::arg("a"), py::arg("b"), py::arg("resolution_ps"), py::arg("duration_s"),
      py::arg("window_ps"), py::arg("offset_ps") = 0);

  // tagio
  m.def("write_streams", &write_streams, py::arg("path"), py::arg("streams"));
  m.def("read_streams", &read_streams, py::arg("path"));
  m.def("export_csv", &export_csv, py::arg("streams"), py::arg("path"));
}
