#ifndef SPDCLAB_PAIR_MODEL_HPP
#define SPDCLAB_PAIR_MODEL_HPP

//
// Closed-form pair-source statistics: the heralded-g2 prediction for a CW
// source far below threshold, the Bayes relation between second-order
// correlation functions, and the singles/coincidence rate-to-efficiency
// algebra used to characterize such sources.
//

namespace spdc {

// Operating point of a CW pair source. pair_rate_per_s_mw is the internal
// pair generation rate R normalized to pump power; the generation probability
// per coincidence window is p = R * P * dt.
struct PairSourceOperatingPoint {
  double pair_rate_per_s_mw = 2.1e5;
  double pump_power_mw = 1.2;
  double coincidence_window_ns = 8.0;

  // R * P, pairs per second.
  double generation_rate_hz() const { return pair_rate_per_s_mw * pump_power_mw; }
  // p = R P dt, pairs per coincidence window.
  double pairs_per_window() const { return generation_rate_hz() * coincidence_window_ns * 1e-9; }
};

// Measured singles and coincidence rates.
struct RateSummary {
  double n_s_hz = 0.0;  // signal-arm singles
  double n_i_hz = 0.0;  // idler-arm singles
  double pair_rate_hz = 0.0;
  double duration_s = 0.0;
};

// Derived arm efficiencies and normalized rates.
struct EfficiencySummary {
  double eta_s = 0.0;          // r / n_i
  double eta_i = 0.0;          // r / n_s
  double eta_heralded = 0.0;   // r / (eta_det n_i)
  double pair_rate_per_s_mw = 0.0;   // inferred R = n_i n_s / (r P)
  double detected_pairs_per_s_mw = 0.0;  // r / P
};

// g2_c = 2p - p^2 with p = R P dt. Valid for p in [0, 1]; beyond one pair per
// window the far-below-threshold theory does not apply and a domain error is
// raised rather than extrapolating.
double heralded_g2_prediction(const PairSourceOperatingPoint& op);

// Bayes relation between autocorrelations and the cross-correlation:
// g2_c = g2_ss * g2_ii / g2_si.
double bayes_g2c(double g2_ss, double g2_ii, double g2_si);

// Cross-correlation predicted by inserting the heralded-g2 prediction into the
// Bayes relation, with the idler autocorrelation substituted for the signal:
// g2_si = g2_ii^2 / g2_c(op).
double predicted_cross_corr(double g2_ii, const PairSourceOperatingPoint& op);

// The full rate-to-efficiency algebra from measured rates.
EfficiencySummary efficiencies_from_rates(const RateSummary& rates, double eta_det,
                                          double pump_power_mw);

// Forward model: expected singles and coincidence rates for given total arm
// efficiencies (all optics and detector) and dark rates. The coincidence rate
// includes the flat accidental background n_s * n_i * dt.
RateSummary expected_rates(const PairSourceOperatingPoint& op, double arm_eff_s,
                           double arm_eff_i, double dark_s_hz, double dark_i_hz);

}  // namespace spdc

#endif
