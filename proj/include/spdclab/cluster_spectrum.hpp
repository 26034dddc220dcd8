#ifndef SPDCLAB_CLUSTER_SPECTRUM_HPP
#define SPDCLAB_CLUSTER_SPECTRUM_HPP

//
// Double-resonance mode-cluster structure of a non-degenerate OPO pair source:
// which signal cavity modes have an energy-conservation partner close to an
// idler cavity mode, how strongly each emits, and the phenomenological
// strain-tuning and drift models.
//

#include <cstdint>
#include <optional>
#include <vector>

namespace spdc {

// Signal and idler cavity mode combs. Offsets place the comb relative to the
// reference frequency (signal) and to pump-minus-reference (idler); offset 0
// means a mode sits exactly at the reference, i.e. perfect double resonance.
struct CombSpec {
  double fsr_s_ghz = 16.0;
  double fsr_i_ghz = 15.0;
  double linewidth_s_mhz = 444.0;  // FSR 16 GHz / finesse 36
  double linewidth_i_mhz = 444.0;
  double offset_s_mhz = 0.0;
  double offset_i_mhz = 0.0;
  // When set, side lines are split into doublets: a second idler comb offset
  // by this amount contributes a partner line displaced by the same amount.
  // Purely phenomenological, off by default.
  std::optional<double> doublet_split_mhz;
};

// One emission line of a cluster: signal detuning and relative intensity.
struct ClusterLine {
  double detuning_ghz = 0.0;
  double weight = 0.0;
};

// Emission lines of the cluster around the reference frequency: every signal
// comb mode within [-span, +span], weighted by the Lorentzian overlap of its
// energy-conservation partner with the nearest idler comb mode. The overlap
// width is the idler linewidth (the signal mode pins the emission frequency).
// Equal FSRs are allowed and give an all-unit-weight degenerate comb.
std::vector<ClusterLine> emission_lines(const CombSpec& comb, double span_ghz);

// Detuning period after which signal/idler comb alignment recurs:
// FSR_s * FSR_i / |FSR_s - FSR_i|. Diverges (throws) for equal FSRs.
double cluster_spacing_ghz(double fsr_s_ghz, double fsr_i_ghz);

// Weight of the line nearest zero detuning over the total weight of all lines
// within +-window.
double central_fraction(const std::vector<ClusterLine>& lines, double window_ghz);

// Piecewise-linear strain tuning: no shift until the piezo makes contact, then
// slope * (V - V_contact), clamped to +-max_range.
double strain_detuning_ghz(double voltage_v, double contact_voltage_v,
                           double slope_ghz_per_v, double max_range_ghz = 3.0);

// Linear long-term drift model, rate * elapsed.
double drift_detuning_mhz(double elapsed_h, double rate_mhz_per_h);

// Synthetic drift trace: linear trend plus an optional bounded random walk
// (step size per sample; excursions from the trend are clamped to +-bound).
std::vector<double> drift_trace_mhz(double duration_h, int n_samples,
                                    double rate_mhz_per_h, double walk_step_mhz,
                                    double walk_bound_mhz, std::uint64_t seed);

}  // namespace spdc

#endif
