#include "spdclab/cluster_spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "spdclab/lineshape.hpp"
#include "spdclab/rng.hpp"

namespace spdc {

namespace {

// Distance from x to the nearest point of the comb {offset + k * fsr}.
double comb_mismatch_mhz(double x_mhz, double offset_mhz, double fsr_mhz) {
  const double r = std::remainder(x_mhz - offset_mhz, fsr_mhz);
  return std::abs(r);
}

void check_comb(const CombSpec& c) {
  if (!(c.fsr_s_ghz > 0.0) || !(c.fsr_i_ghz > 0.0))
    throw std::invalid_argument("comb: FSRs must be > 0");
  if (!(c.linewidth_s_mhz > 0.0) || !(c.linewidth_i_mhz > 0.0))
    throw std::invalid_argument("comb: linewidths must be > 0");
  if (!std::isfinite(c.offset_s_mhz) || !std::isfinite(c.offset_i_mhz))
    throw std::invalid_argument("comb: offsets must be finite");
}

}  // namespace

std::vector<ClusterLine> emission_lines(const CombSpec& comb, double span_ghz) {
  check_comb(comb);
  if (!(span_ghz > 0.0)) throw std::invalid_argument("emission_lines: span must be > 0");

  const double fsr_s = comb.fsr_s_ghz;
  const double off_s_ghz = comb.offset_s_mhz * 1e-3;
  const double fsr_i_mhz = comb.fsr_i_ghz * 1e3;
  // Overlap width: the idler linewidth, since the signal comb mode pins the
  // emission frequency and the partner has to hit an idler resonance.
  const double width = comb.linewidth_i_mhz;

  std::vector<ClusterLine> lines;
  const auto m_lo = static_cast<long>(std::ceil((-span_ghz - off_s_ghz) / fsr_s));
  const auto m_hi = static_cast<long>(std::floor((span_ghz - off_s_ghz) / fsr_s));
  for (long m = m_lo; m <= m_hi; ++m) {
    const double nu = off_s_ghz + static_cast<double>(m) * fsr_s;  // signal detuning, GHz
    // Energy conservation: the partner idler detuning (relative to pump minus
    // reference) is -nu.
    const double partner_mhz = -nu * 1e3;
    const double mism = comb_mismatch_mhz(partner_mhz, comb.offset_i_mhz, fsr_i_mhz);
    lines.push_back({nu, lorentzian_weight(mism, width)});
    if (comb.doublet_split_mhz) {
      const double split = *comb.doublet_split_mhz;
      const double mism2 =
          comb_mismatch_mhz(partner_mhz, comb.offset_i_mhz + split, fsr_i_mhz);
      lines.push_back({nu + split * 1e-3, lorentzian_weight(mism2, width)});
    }
  }
  std::sort(lines.begin(), lines.end(),
            [](const ClusterLine& a, const ClusterLine& b) { return a.detuning_ghz < b.detuning_ghz; });
  return lines;
}

double cluster_spacing_ghz(double fsr_s_ghz, double fsr_i_ghz) {
  if (!(fsr_s_ghz > 0.0) || !(fsr_i_ghz > 0.0))
    throw std::invalid_argument("cluster_spacing: FSRs must be > 0");
  if (fsr_s_ghz == fsr_i_ghz)
    throw std::domain_error("cluster_spacing: equal FSRs, degenerate cluster");
  return fsr_s_ghz * fsr_i_ghz / std::abs(fsr_s_ghz - fsr_i_ghz);
}

double central_fraction(const std::vector<ClusterLine>& lines, double window_ghz) {
  if (lines.empty()) throw std::invalid_argument("central_fraction: no lines");
  if (!(window_ghz > 0.0)) throw std::invalid_argument("central_fraction: window must be > 0");

  const ClusterLine* central = &lines.front();
  double total = 0.0;
  for (const auto& l : lines) {
    if (std::abs(l.detuning_ghz) < std::abs(central->detuning_ghz)) central = &l;
    if (std::abs(l.detuning_ghz) <= window_ghz) total += l.weight;
  }
  if (total <= 0.0) throw std::invalid_argument("central_fraction: window contains no weight");
  return central->weight / total;
}

double strain_detuning_ghz(double voltage_v, double contact_voltage_v,
                           double slope_ghz_per_v, double max_range_ghz) {
  if (!std::isfinite(slope_ghz_per_v))
    throw std::invalid_argument("strain_detuning: slope must be finite");
  if (!(max_range_ghz > 0.0))
    throw std::invalid_argument("strain_detuning: max range must be > 0");
  if (voltage_v <= contact_voltage_v) return 0.0;
  const double d = slope_ghz_per_v * (voltage_v - contact_voltage_v);
  return std::clamp(d, -max_range_ghz, max_range_ghz);
}

double drift_detuning_mhz(double elapsed_h, double rate_mhz_per_h) {
  if (!(elapsed_h >= 0.0)) throw std::invalid_argument("drift_detuning: elapsed must be >= 0");
  return rate_mhz_per_h * elapsed_h;
}

std::vector<double> drift_trace_mhz(double duration_h, int n_samples,
                                    double rate_mhz_per_h, double walk_step_mhz,
                                    double walk_bound_mhz, std::uint64_t seed) {
  if (n_samples < 2) throw std::invalid_argument("drift_trace: need at least 2 samples");
  if (!(duration_h >= 0.0)) throw std::invalid_argument("drift_trace: negative duration");
  if (walk_step_mhz < 0.0 || walk_bound_mhz < 0.0)
    throw std::invalid_argument("drift_trace: negative walk parameters");

  Xoshiro256pp rng(seed);
  std::vector<double> trace(n_samples);
  double walk = 0.0;
  for (int i = 0; i < n_samples; ++i) {
    const double t = duration_h * static_cast<double>(i) / (n_samples - 1);
    trace[i] = drift_detuning_mhz(t, rate_mhz_per_h) + walk;
    if (walk_step_mhz > 0.0) {
      walk += (rng.uniform() < 0.5 ? -walk_step_mhz : walk_step_mhz);
      walk = std::clamp(walk, -walk_bound_mhz, walk_bound_mhz);
    }
  }
  return trace;
}

}  // namespace spdc
