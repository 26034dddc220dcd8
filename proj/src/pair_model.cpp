#include "spdclab/pair_model.hpp"

#include <cmath>
#include <stdexcept>

namespace spdc {

namespace {

void validate(const PairSourceOperatingPoint& op) {
  if (!(op.pair_rate_per_s_mw >= 0.0) || !std::isfinite(op.pair_rate_per_s_mw))
    throw std::invalid_argument("operating point: pair rate must be >= 0");
  if (!(op.pump_power_mw >= 0.0) || !std::isfinite(op.pump_power_mw))
    throw std::invalid_argument("operating point: pump power must be >= 0");
  if (!(op.coincidence_window_ns > 0.0))
    throw std::invalid_argument("operating point: coincidence window must be > 0");
}

}  // namespace

double heralded_g2_prediction(const PairSourceOperatingPoint& op) {
  validate(op);
  const double p = op.pairs_per_window();
  if (p > 1.0)
    throw std::domain_error("heralded_g2_prediction: p = R P dt > 1, outside validity");
  return 2.0 * p - p * p;
}

double bayes_g2c(double g2_ss, double g2_ii, double g2_si) {
  if (!(g2_si > 0.0))
    throw std::domain_error("bayes_g2c: cross-correlation must be > 0");
  if (g2_ss < 0.0 || g2_ii < 0.0)
    throw std::invalid_argument("bayes_g2c: autocorrelations must be >= 0");
  return g2_ss * g2_ii / g2_si;
}

double predicted_cross_corr(double g2_ii, const PairSourceOperatingPoint& op) {
  if (g2_ii < 0.0)
    throw std::invalid_argument("predicted_cross_corr: g2_ii must be >= 0");
  const double g2c = heralded_g2_prediction(op);
  if (g2c == 0.0)
    throw std::domain_error("predicted_cross_corr: zero pair rate, bunching diverges");
  return g2_ii * g2_ii / g2c;
}

EfficiencySummary efficiencies_from_rates(const RateSummary& rates, double eta_det,
                                          double pump_power_mw) {
  if (!(eta_det > 0.0 && eta_det <= 1.0))
    throw std::invalid_argument("efficiencies_from_rates: eta_det must be in (0, 1]");
  if (!(pump_power_mw > 0.0))
    throw std::invalid_argument("efficiencies_from_rates: pump power must be > 0");
  if (rates.n_s_hz < 0.0 || rates.n_i_hz < 0.0 || rates.pair_rate_hz < 0.0)
    throw std::invalid_argument("efficiencies_from_rates: negative rate");
  if (rates.pair_rate_hz == 0.0)
    throw std::domain_error("efficiencies_from_rates: zero pair rate, efficiencies undefined");
  if (rates.pair_rate_hz > std::min(rates.n_s_hz, rates.n_i_hz))
    throw std::invalid_argument(
        "efficiencies_from_rates: pair rate exceeds a singles rate");

  EfficiencySummary out;
  out.eta_s = rates.pair_rate_hz / rates.n_i_hz;
  out.eta_i = rates.pair_rate_hz / rates.n_s_hz;
  out.eta_heralded = rates.pair_rate_hz / (eta_det * rates.n_i_hz);
  if (out.eta_heralded > 1.0)
    throw std::invalid_argument(
        "efficiencies_from_rates: eta_det inconsistent with rates (eta_heralded > 1)");
  out.pair_rate_per_s_mw =
      rates.n_i_hz * rates.n_s_hz / (rates.pair_rate_hz * pump_power_mw);
  out.detected_pairs_per_s_mw = rates.pair_rate_hz / pump_power_mw;
  return out;
}

RateSummary expected_rates(const PairSourceOperatingPoint& op, double arm_eff_s,
                           double arm_eff_i, double dark_s_hz, double dark_i_hz) {
  validate(op);
  if (!(arm_eff_s >= 0.0 && arm_eff_s <= 1.0) || !(arm_eff_i >= 0.0 && arm_eff_i <= 1.0))
    throw std::invalid_argument("expected_rates: efficiencies must be in [0, 1]");
  if (dark_s_hz < 0.0 || dark_i_hz < 0.0)
    throw std::invalid_argument("expected_rates: dark rates must be >= 0");

  const double rp = op.generation_rate_hz();
  const double dt_s = op.coincidence_window_ns * 1e-9;
  RateSummary out;
  out.n_s_hz = arm_eff_s * rp + dark_s_hz;
  out.n_i_hz = arm_eff_i * rp + dark_i_hz;
  // True pairs plus flat accidentals.
  out.pair_rate_hz = arm_eff_s * arm_eff_i * rp + out.n_s_hz * out.n_i_hz * dt_s;
  out.duration_s = 1.0;
  return out;
}

}  // namespace spdc
