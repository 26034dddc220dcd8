#include "spdclab/lineshape.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "spdclab/quadrature.hpp"

namespace spdc {

namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

void check_etalon(const EtalonSpec& e) {
  require(std::isfinite(e.fsr_ghz) && std::isfinite(e.fwhm_mhz),
          "etalon: non-finite parameters");
  require(e.fwhm_mhz > 0.0, "etalon: fwhm must be > 0");
  require(e.fsr_mhz() > e.fwhm_mhz, "etalon: fsr must exceed fwhm");
}

}  // namespace

double gaussian_fwhm_to_sigma(double fwhm) {
  static const double k = 2.0 * std::sqrt(2.0 * std::numbers::ln2);  // 2.35482
  return fwhm / k;
}

double lorentzian_weight(double detuning_mhz, double fwhm_mhz) {
  require(fwhm_mhz > 0.0, "lorentzian_weight: fwhm must be > 0");
  require(std::isfinite(detuning_mhz), "lorentzian_weight: detuning must be finite");
  const double x = 2.0 * detuning_mhz / fwhm_mhz;
  return 1.0 / (1.0 + x * x);
}

double coherence_time_ns(double fwhm_mhz) {
  require(fwhm_mhz > 0.0, "coherence_time: fwhm must be > 0");
  return 1e3 / (std::numbers::pi * fwhm_mhz);  // 1/(pi Gamma), MHz -> ns
}

double product_line_fwhm(double fwhm_a_mhz, double fwhm_b_mhz) {
  require(fwhm_a_mhz > 0.0 && fwhm_b_mhz > 0.0, "product_line_fwhm: widths must be > 0");
  const double a2 = 0.25 * fwhm_a_mhz * fwhm_a_mhz;  // (fwhm/2)^2
  const double b2 = 0.25 * fwhm_b_mhz * fwhm_b_mhz;
  // Positive root of x^2 + (a2 + b2) x - a2 b2, in the cancellation-free form
  // x = 2 a2 b2 / (s + sqrt(s^2 + 4 a2 b2)) so very unequal widths stay exact.
  const double s = a2 + b2;
  const double x = 2.0 * a2 * b2 / (s + std::sqrt(s * s + 4.0 * a2 * b2));
  return 2.0 * std::sqrt(x);
}

double ideal_thermal_autocorr(double tau_ns, double tau0_ns) {
  require(tau0_ns > 0.0, "ideal_thermal_autocorr: tau0 must be > 0");
  return 1.0 + std::exp(-2.0 * std::abs(tau_ns) / tau0_ns);
}

double multimode_autocorr_peak(int n_modes) {
  require(n_modes >= 1, "multimode_autocorr_peak: need at least one mode");
  return 1.0 + 1.0 / static_cast<double>(n_modes);
}

double erfcx(double x) {
  if (x < 0.0) throw std::invalid_argument("erfcx: negative argument not supported");
  if (x < 25.0) return std::exp(x * x) * std::erfc(x);
  // Asymptotic series, accurate to ~1e-12 for x >= 25.
  const double ix2 = 1.0 / (x * x);
  const double series = 1.0 + ix2 * (-0.5 + ix2 * (0.75 + ix2 * -1.875));
  return series / (x * std::sqrt(std::numbers::pi));
}

double irf_convolved_autocorr(double tau_ns, double tau0_ns, const IrfSpec& irf) {
  require(tau0_ns > 0.0, "irf_convolved_autocorr: tau0 must be > 0");
  require(irf.sigma_ns >= 0.0, "irf_convolved_autocorr: sigma must be >= 0");
  if (irf.sigma_ns == 0.0) return ideal_thermal_autocorr(tau_ns, tau0_ns);

  // exp(-a|t|) * Gaussian(sigma) at lag t, written with erfcx so that the
  // e^(a^2 s^2 / 2) prefactor never overflows:
  //   conv(t) = 0.5 e^(-t^2/2s^2) [erfcx(B1) + erfcx(B2)],
  //   B1 = (t + a s^2)/(sqrt2 s), B2 = (a s^2 - t)/(sqrt2 s).
  // For B2 < 0, erfcx(B2) = 2 e^(B2^2) - erfcx(-B2) with the exponentials
  // combined analytically (the joint exponent a^2 s^2/2 - a t is <= 0 there).
  const double a = 2.0 / tau0_ns;
  const double s = irf.sigma_ns;
  const double t = std::abs(tau_ns);
  const double gauss = std::exp(-t * t / (2.0 * s * s));
  const double b1 = (t + a * s * s) / (std::numbers::sqrt2 * s);
  const double b2 = (a * s * s - t) / (std::numbers::sqrt2 * s);
  double term2;
  if (b2 >= 0.0) {
    term2 = erfcx(b2) * gauss;
  } else {
    term2 = 2.0 * std::exp(0.5 * a * a * s * s - a * t) - erfcx(-b2) * gauss;
  }
  return 1.0 + 0.5 * (erfcx(b1) * gauss + term2);
}

double window_averaged_g2(double tau0_ns, const IrfSpec& irf, double half_window_ns) {
  require(half_window_ns > 0.0, "window_averaged_g2: half_window must be > 0");
  require(tau0_ns > 0.0, "window_averaged_g2: tau0 must be > 0");
  require(irf.sigma_ns >= 0.0, "window_averaged_g2: sigma must be >= 0");
  // The integrand is even in tau; integrate the bunching excess over [0, W].
  const double excess = integrate(
      [&](double tau) { return irf_convolved_autocorr(tau, tau0_ns, irf) - 1.0; }, 0.0,
      half_window_ns, 1e-7);
  return 1.0 + excess / half_window_ns;
}

double airy_transmission(double detuning_mhz, const EtalonSpec& etalon) {
  check_etalon(etalon);
  require(std::isfinite(detuning_mhz), "airy_transmission: detuning must be finite");
  const double coeff = 2.0 * etalon.finesse() / std::numbers::pi;
  const double s = std::sin(std::numbers::pi * detuning_mhz / etalon.fsr_mhz());
  return 1.0 / (1.0 + coeff * coeff * s * s);
}

double filtered_fraction(const SpectralLine& source, const EtalonSpec& etalon,
                         double half_window_mhz) {
  check_etalon(etalon);
  require(source.fwhm_mhz > 0.0, "filtered_fraction: source fwhm must be > 0");
  require(half_window_mhz > 0.0, "filtered_fraction: half_window must be > 0");
  // Source and etalon are co-centered: work in detuning relative to the line.
  const auto line = [&](double f) { return lorentzian_weight(f, source.fwhm_mhz); };
  const double num = integrate(
      [&](double f) { return line(f) * airy_transmission(f, etalon); },
      -half_window_mhz, half_window_mhz, 1e-5);
  const double den = integrate(line, -half_window_mhz, half_window_mhz, 1e-5);
  return num / den;
}

}  // namespace spdc
