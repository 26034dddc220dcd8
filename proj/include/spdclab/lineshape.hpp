#ifndef SPDCLAB_LINESHAPE_HPP
#define SPDCLAB_LINESHAPE_HPP

//
// Lineshape and correlation-function math shared by the rest of the library.
//
// Unit conventions: frequencies in MHz (except cavity/etalon FSRs, which are
// in GHz), times in nanoseconds. All functions here are pure and thread-safe.
//

namespace spdc {

// A Lorentzian emission or filter line. 'center_mhz' is a detuning relative
// to whatever reference the caller uses (source central frequency, pump, ...).
struct SpectralLine {
  double center_mhz = 0.0;
  double fwhm_mhz = 0.0;
};

// Plane Fabry-Perot etalon, e.g. the idler filter (FSR 12.8 GHz, FWHM 274 MHz).
struct EtalonSpec {
  double fsr_ghz = 0.0;
  double fwhm_mhz = 0.0;

  double fsr_mhz() const { return 1e3 * fsr_ghz; }
  double finesse() const { return fsr_mhz() / fwhm_mhz; }
};

// Gaussian instrument response (detector timing jitter), parametrized by the
// standard deviation. Note: when a jitter is quoted as the width of a measured
// detector-pair cross-correlation it is a FWHM; convert with
// gaussian_fwhm_to_sigma before building an IrfSpec.
struct IrfSpec {
  double sigma_ns = 0.0;
};

// FWHM -> standard deviation for a Gaussian (divide by 2*sqrt(2 ln 2)).
double gaussian_fwhm_to_sigma(double fwhm);

// Peak-normalized Lorentzian: 1 / (1 + (2 d / fwhm)^2). Value 1 at d = 0.
double lorentzian_weight(double detuning_mhz, double fwhm_mhz);

// Coherence time of Lorentzian light, tau0 = 1 / (pi Gamma).
double coherence_time_ns(double fwhm_mhz);

// FWHM of the pointwise product of two co-centered Lorentzians. The product
// is not itself a Lorentzian; this is the conventional effective width. With
// a = fwhm_a/2, b = fwhm_b/2 the half-maximum condition gives
// x^2 + (a^2 + b^2) x - a^2 b^2 = 0 in x = f^2, and the FWHM is 2 sqrt(x+).
double product_line_fwhm(double fwhm_a_mhz, double fwhm_b_mhz);

// Single-mode thermal (chaotic) light: g2(tau) = 1 + exp(-2|tau|/tau0).
double ideal_thermal_autocorr(double tau_ns, double tau0_ns);

// Zero-delay autocorrelation of N equally bright thermal modes: 1 + 1/N.
double multimode_autocorr_peak(int n_modes);

// Thermal autocorrelation convolved with a Gaussian IRF of width irf.sigma_ns.
// Closed form via the scaled complementary error function; sigma = 0 reduces
// exactly to ideal_thermal_autocorr.
double irf_convolved_autocorr(double tau_ns, double tau0_ns, const IrfSpec& irf);

// Average of irf_convolved_autocorr over [-half_window, +half_window],
// evaluated by adaptive quadrature (relative error < 1e-6). Model counterpart
// of a g2 value integrated over a finite coincidence window.
double window_averaged_g2(double tau0_ns, const IrfSpec& irf, double half_window_ns);

// Airy transmission of an etalon at a given detuning from resonance:
// T = 1 / (1 + (2F/pi)^2 sin^2(pi d / FSR)). Periodic in the FSR.
double airy_transmission(double detuning_mhz, const EtalonSpec& etalon);

// Fraction of the photons inside [-half_window, +half_window] of a co-centered
// Lorentzian line that pass the etalon:
//   int L(f) T(f) df / int L(f) df, both over the window.
// Quadrature relative error < 1e-4.
double filtered_fraction(const SpectralLine& source, const EtalonSpec& etalon,
                         double half_window_mhz);

// exp(x^2) erfc(x) for x >= 0, stable where erfc underflows.
double erfcx(double x);

}  // namespace spdc

#endif
