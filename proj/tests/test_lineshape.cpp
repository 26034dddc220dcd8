#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "spdclab/lineshape.hpp"
#include "spdclab/quadrature.hpp"

#include "oracles.hpp"

using namespace spdc;

TEST_CASE("lorentzian weight values and validation") {
  CHECK(lorentzian_weight(0.0, 226.0) == doctest::Approx(1.0));
  CHECK(lorentzian_weight(113.0, 226.0) == doctest::Approx(0.5));
  // 1 / (1 + (2000/444)^2)
  CHECK(lorentzian_weight(1000.0, 444.0) == doctest::Approx(0.0469692).epsilon(1e-5));
  CHECK_THROWS_AS(lorentzian_weight(0.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(lorentzian_weight(0.0, -5.0), std::invalid_argument);
}

TEST_CASE("lorentzian weight is even and decreasing in |detuning|") {
  double prev = 2.0;
  for (int i = 0; i <= 200; ++i) {
    const double d = 15.0 * i;
    const double w = lorentzian_weight(d, 226.0);
    CHECK(w == doctest::Approx(lorentzian_weight(-d, 226.0)).epsilon(1e-14));
    CHECK(w < prev);
    prev = w;
  }
}

TEST_CASE("coherence time") {
  CHECK(coherence_time_ns(159.15) == doctest::Approx(2.0000621).epsilon(1e-6));
  CHECK(coherence_time_ns(226.0) == doctest::Approx(1.4084508).epsilon(1e-6));
  CHECK(coherence_time_ns(1e9) < 1e-5);  // broad line, vanishing coherence
  CHECK_THROWS_AS(coherence_time_ns(0.0), std::invalid_argument);
}

TEST_CASE("product line width closed form") {
  // Half-maximum of the product of the two Lorentzians, solved numerically.
  auto product = [](double f) {
    return lorentzian_weight(f, 226.0) * lorentzian_weight(f, 274.0);
  };
  const double w = product_line_fwhm(226.0, 274.0);
  CHECK(product(0.5 * w) == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(w == doctest::Approx(159.110).epsilon(1e-4));
  // Equal widths: Gamma * sqrt(sqrt(2) - 1)
  CHECK(product_line_fwhm(100.0, 100.0) == doctest::Approx(64.3594).epsilon(1e-5));
  // One factor much broader than the other
  CHECK(product_line_fwhm(100.0, 1e9) == doctest::Approx(100.0).epsilon(1e-6));
  CHECK_THROWS_AS(product_line_fwhm(0.0, 100.0), std::invalid_argument);
}

TEST_CASE("product line width is symmetric and bounded by the narrower line") {
  for (double a : {37.0, 100.0, 226.0, 951.0}) {
    for (double b : {12.0, 274.0, 444.0, 3000.0}) {
      const double w = product_line_fwhm(a, b);
      CHECK(w == doctest::Approx(product_line_fwhm(b, a)).epsilon(1e-12));
      CHECK(w <= std::min(a, b));
      CHECK(w > 0.0);
    }
  }
}

TEST_CASE("source times filter line: 226 x 274 MHz gives tau0 = 2 ns") {
  const double tau0 = coherence_time_ns(product_line_fwhm(226.0, 274.0));
  CHECK(tau0 == doctest::Approx(2.0).epsilon(0.01));
}

TEST_CASE("ideal thermal autocorrelation") {
  CHECK(ideal_thermal_autocorr(0.0, 2.0) == doctest::Approx(2.0));
  CHECK(ideal_thermal_autocorr(2.0, 2.0) == doctest::Approx(1.0 + std::exp(-2.0)));
  CHECK(ideal_thermal_autocorr(1e6, 2.0) == doctest::Approx(1.0));
  CHECK(ideal_thermal_autocorr(-1.3, 2.0) ==
        doctest::Approx(ideal_thermal_autocorr(1.3, 2.0)));
  CHECK_THROWS_AS(ideal_thermal_autocorr(0.0, 0.0), std::invalid_argument);
}

TEST_CASE("multimode peak") {
  CHECK(multimode_autocorr_peak(1) == doctest::Approx(2.0));
  CHECK(multimode_autocorr_peak(3) == doctest::Approx(1.0 + 1.0 / 3.0));
  CHECK(multimode_autocorr_peak(1000000) == doctest::Approx(1.0).epsilon(1e-5));
  CHECK_THROWS_AS(multimode_autocorr_peak(0), std::invalid_argument);
}

TEST_CASE("IRF-convolved autocorrelation against quadrature") {
  const IrfSpec irf{0.7304};
  // Peak value: e^(2 s^2 / tau0^2) erfc(sqrt2 s / tau0) + 1
  CHECK(irf_convolved_autocorr(0.0, 2.0, irf) == doctest::Approx(1.60734).epsilon(2e-5));
  for (double tau : {0.0, 0.3, 1.0, 2.0, 5.0, 12.0}) {
    const double numeric = oracle::conv_thermal_g2(tau, 2.0, irf.sigma_ns);
    CHECK(irf_convolved_autocorr(tau, 2.0, irf) ==
          doctest::Approx(numeric).epsilon(1e-6));
    CHECK(irf_convolved_autocorr(-tau, 2.0, irf) ==
          doctest::Approx(irf_convolved_autocorr(tau, 2.0, irf)).epsilon(1e-12));
  }
}

TEST_CASE("IRF-convolved autocorrelation limits") {
  // Delta-function IRF reduces to the ideal case.
  for (double tau = -8.0; tau <= 8.0; tau += 0.37) {
    CHECK(std::abs(irf_convolved_autocorr(tau, 2.0, {0.0}) -
                   ideal_thermal_autocorr(tau, 2.0)) < 1e-9);
  }
  // Jitter much larger than the coherence time washes the correlation out.
  CHECK(irf_convolved_autocorr(0.0, 2.0, {2000.0}) == doctest::Approx(1.0).epsilon(1e-3));
  // Large lags remain finite and decay to 1 (overflow-safe evaluation).
  CHECK(irf_convolved_autocorr(400.0, 2.0, {50.0}) > 1.0);
  CHECK(irf_convolved_autocorr(4000.0, 2.0, {50.0}) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("bunching area is conserved under IRF convolution") {
  // int (g2 - 1) dtau = tau0 for the ideal shape, and convolution with a
  // unit-area Gaussian must preserve it.
  const double tau0 = 2.0;
  const double ideal = integrate(
      [&](double t) { return ideal_thermal_autocorr(t, tau0) - 1.0; }, -80.0, 80.0, 1e-8);
  CHECK(ideal == doctest::Approx(tau0).epsilon(1e-6));
  const double convolved = integrate(
      [&](double t) { return irf_convolved_autocorr(t, tau0, {0.7304}) - 1.0; }, -80.0,
      80.0, 1e-8);
  CHECK(convolved == doctest::Approx(tau0).epsilon(1e-6));
}

TEST_CASE("window-averaged g2") {
  // sigma = 0: 1 + (tau0 / 2W) (1 - e^(-2W/tau0)) analytically.
  CHECK(window_averaged_g2(2.0, {0.0}, 4.0) == doctest::Approx(1.2454211).epsilon(1e-6));
  // Default jitter moves a little mass outside the window.
  CHECK(window_averaged_g2(2.0, {0.7304}, 4.0) == doctest::Approx(1.2440).epsilon(2e-3));
  // Wide window: multimode limit 1.
  CHECK(window_averaged_g2(2.0, {0.7304}, 5000.0) == doctest::Approx(1.0).epsilon(1e-3));
  CHECK_THROWS_AS(window_averaged_g2(2.0, {0.0}, 0.0), std::invalid_argument);
}

TEST_CASE("airy transmission") {
  const EtalonSpec etalon{12.8, 274.0};
  CHECK(etalon.finesse() == doctest::Approx(46.715).epsilon(1e-3));
  CHECK(airy_transmission(0.0, etalon) == doctest::Approx(1.0));
  CHECK(airy_transmission(12800.0, etalon) == doctest::Approx(1.0).epsilon(1e-9));
  // Extinction at FSR/2; nominally quoted as 1.2e-3.
  CHECK(airy_transmission(6400.0, etalon) == doctest::Approx(1.1294e-3).epsilon(1e-3));
  CHECK_THROWS_AS(airy_transmission(0.0, EtalonSpec{0.1, 274.0}), std::invalid_argument);
}

TEST_CASE("airy transmission is periodic in the FSR") {
  const EtalonSpec etalon{12.8, 274.0};
  for (double d = -20000.0; d <= 20000.0; d += 517.0) {
    CHECK(airy_transmission(d + 12800.0, etalon) ==
          doctest::Approx(airy_transmission(d, etalon)).epsilon(1e-9));
  }
}

TEST_CASE("filtered fraction") {
  const EtalonSpec etalon{12.8, 274.0};
  // Spec'd integrand, cross-checked with fixed-grid Simpson.
  auto num = oracle::simpson(
      [&](double f) {
        return lorentzian_weight(f, 226.0) * airy_transmission(f, etalon);
      },
      -200.0, 200.0);
  auto den = oracle::simpson([&](double f) { return lorentzian_weight(f, 226.0); },
                             -200.0, 200.0);
  const double value = filtered_fraction({0.0, 226.0}, etalon, 200.0);
  CHECK(value == doctest::Approx(num / den).epsilon(1e-4));
  CHECK(value == doctest::Approx(0.7588).epsilon(1e-3));

  // Flat spectrum across the window: the quoted 68 % transmission of the
  // photons in a 400 MHz window, reproduced at 0.665.
  const double flat = filtered_fraction({0.0, 1e9}, etalon, 200.0);
  CHECK(flat == doctest::Approx(0.665).epsilon(2e-3));
  CHECK(std::abs(flat - 0.68) < 0.03);

  // Etalon much broader than the window is transparent.
  CHECK(filtered_fraction({0.0, 226.0}, {12.8, 12000.0}, 200.0) ==
        doctest::Approx(1.0).epsilon(1e-2));
  // Vanishing window: both integrands are peak-normalized at the center.
  CHECK(filtered_fraction({0.0, 226.0}, etalon, 0.01) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK_THROWS_AS(filtered_fraction({0.0, 0.0}, etalon, 200.0), std::invalid_argument);
  CHECK_THROWS_AS(filtered_fraction({0.0, 226.0}, etalon, -1.0), std::invalid_argument);
}

TEST_CASE("gaussian width conversion") {
  CHECK(gaussian_fwhm_to_sigma(1.72) == doctest::Approx(0.73042).epsilon(1e-4));
  CHECK(gaussian_fwhm_to_sigma(2.354820045) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("erfcx stays finite and accurate") {
  CHECK(erfcx(0.0) == doctest::Approx(1.0));
  CHECK(erfcx(0.51647) == doctest::Approx(std::exp(0.51647 * 0.51647) * std::erfc(0.51647))
                              .epsilon(1e-12));
  // Across the series switchover.
  for (double x : {10.0, 24.9, 25.1, 100.0, 1e4}) {
    const double v = erfcx(x);
    CHECK(std::isfinite(v));
    // Sandwich 1/(sqrt(pi)(x + 1/x)) < erfcx(x) < 1/(sqrt(pi) x)
    CHECK(v < 1.0 / (std::sqrt(std::acos(-1.0)) * x));
    CHECK(v > 1.0 / (std::sqrt(std::acos(-1.0)) * (x + 1.0 / x)));
  }
}
