#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "spdclab/correlator.hpp"
#include "spdclab/errors.hpp"

#include "oracles.hpp"

using namespace spdc;

TEST_CASE("single pair lands in the right bin") {
  const std::vector<std::int64_t> a = {0};
  const std::vector<std::int64_t> b = {5000};  // +5 ns
  const auto hist = cross_correlation_histogram(a, b, 1, 1.0, 1000, 8000);
  CHECK(hist.n_bins() == 17);
  std::uint64_t total = 0;
  for (int i = 0; i < hist.n_bins(); ++i) {
    total += hist.counts[i];
    if (hist.counts[i] > 0) CHECK(hist.bin_center_ps(i) == 5000);
  }
  CHECK(total == 1);
  CHECK(peak_lag_ps(hist) == 5000);
}

TEST_CASE("bin convention: exact widths and coverage") {
  const std::vector<std::int64_t> empty;
  for (std::int64_t bin : {162, 81, 1000}) {
    const auto hist = cross_correlation_histogram(empty, empty, 1, 1.0, bin, 10 * bin);
    // Scan every representable lag and recount the mapping independently.
    std::vector<std::int64_t> widths(hist.n_bins(), 0);
    for (std::int64_t lag = -hist.max_lag_ps(); lag <= hist.max_lag_ps(); ++lag) {
      const std::int64_t idx = (std::abs(lag) + bin / 2) / bin;
      widths[hist.half_bins + (lag < 0 ? -idx : idx)]++;
    }
    for (int i = 0; i < hist.n_bins(); ++i) {
      CHECK(hist.bin_width_s(i) == doctest::Approx(widths[i] * 1e-12).epsilon(1e-12));
    }
  }
}

TEST_CASE("unsorted input is a data error") {
  const std::vector<std::int64_t> bad = {10, 5};
  const std::vector<std::int64_t> ok = {1, 2};
  CHECK_THROWS_AS(cross_correlation_histogram(bad, ok, 1, 1.0, 100, 1000), DataError);
  CHECK_THROWS_AS(coincidences(ok, bad, 1, 1.0, 100), DataError);
  CHECK_THROWS_AS(heralded_g2c(bad, ok, ok, 1, 100), DataError);
}

TEST_CASE("empty stream gives an empty histogram, normalization then fails") {
  const std::vector<std::int64_t> empty;
  const std::vector<std::int64_t> some = {1, 2, 3};
  const auto hist = cross_correlation_histogram(empty, some, 1, 1.0, 100, 1000);
  CHECK(hist.n_a == 0);
  for (const auto c : hist.counts) CHECK(c == 0);
  CHECK_THROWS_AS(normalize_g2(hist), std::domain_error);
}

TEST_CASE("time-reversal symmetry: swapped inputs mirror the histogram") {
  std::mt19937_64 rng(5);
  for (int iter = 0; iter < 50; ++iter) {
    const auto a = oracle::random_stream(rng, 400, 100000);
    const auto b = oracle::random_stream(rng, 400, 100000);
    const auto ab = cross_correlation_histogram(a, b, 1, 1.0, 162, 20000);
    const auto ba = cross_correlation_histogram(b, a, 1, 1.0, 162, 20000);
    REQUIRE(ab.n_bins() == ba.n_bins());
    for (int i = 0; i < ab.n_bins(); ++i) {
      CHECK(ab.counts[i] == ba.counts[ba.n_bins() - 1 - i]);
    }
  }
}

TEST_CASE("chunked computation is bit-identical for any chunking") {
  std::mt19937_64 rng(17);
  const auto a = oracle::random_stream(rng, 3000, 1000000);
  const auto b = oracle::random_stream(rng, 3000, 1000000);
  const auto serial = cross_correlation_histogram(a, b, 1, 1.0, 162, 50000, 1);
  for (std::size_t chunks : {2u, 3u, 7u, 16u, 64u, 1000u}) {
    const auto chunked = cross_correlation_histogram(a, b, 1, 1.0, 162, 50000, chunks);
    CHECK(chunked.counts == serial.counts);
  }
  const auto auto_serial = autocorrelation_histogram(a, 1, 1.0, 162, 50000, 1);
  for (std::size_t chunks : {3u, 13u}) {
    CHECK(autocorrelation_histogram(a, 1, 1.0, 162, 50000, chunks).counts ==
          auto_serial.counts);
  }
}

TEST_CASE("brute-force equivalence on random small streams") {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<std::int64_t> bin_dist(1, 4);
  for (int iter = 0; iter < 300; ++iter) {
    const std::int64_t res = bin_dist(rng);
    const auto a = oracle::random_stream(rng, 300, 50000);
    const auto b = oracle::random_stream(rng, 300, 50000);
    const std::int64_t bin = 100 * bin_dist(rng) + 62;
    const std::int64_t max_lag = 5000 + 1000 * bin_dist(rng);

    const auto hist = cross_correlation_histogram(a, b, res, 1.0, bin, max_lag);
    const auto brute = oracle::brute_histogram(a, b, res, bin, max_lag, false);
    REQUIRE(hist.n_bins() == static_cast<int>(brute.counts.size()));
    CHECK(hist.counts == brute.counts);

    const auto self = autocorrelation_histogram(a, res, 1.0, bin, max_lag);
    const auto self_brute = oracle::brute_histogram(a, a, res, bin, max_lag, true);
    CHECK(self.counts == self_brute.counts);

    const std::int64_t window = 500 + 250 * bin_dist(rng);
    const std::int64_t offset = (bin_dist(rng) - 2) * 300;
    CHECK(coincidences(a, b, res, 1.0, window, offset).count ==
          oracle::brute_coincidences(a, b, res, window, offset));

    if (!a.empty()) {
      const auto brute_h = oracle::brute_heralded(a, b, b, res, window, offset);
      if (brute_h.c1 > 0 && brute_h.c2 > 0) {
        const auto fast = heralded_g2c(a, b, b, res, window, offset);
        CHECK(fast.p_s1 == doctest::Approx(double(brute_h.c1) / brute_h.n).epsilon(1e-14));
        CHECK(fast.p_s2 == doctest::Approx(double(brute_h.c2) / brute_h.n).epsilon(1e-14));
        CHECK(fast.p_d == doctest::Approx(double(brute_h.cd) / brute_h.n).epsilon(1e-14));
      } else {
        CHECK_THROWS_AS(heralded_g2c(a, b, b, res, window, offset), std::domain_error);
      }
    }
  }
}

TEST_CASE("flat histogram for independent Poisson streams") {
  std::mt19937_64 rng(43);
  const double rate = 1e5, duration = 10.0;
  const auto a = oracle::poisson_stream(rate, duration, 1, rng);
  const auto b = oracle::poisson_stream(rate, duration, 1, rng);
  const auto hist = cross_correlation_histogram(a, b, 1, duration, 1000, 100000);
  const auto curve = normalize_g2(hist);

  int outliers_5sigma = 0;
  for (int i = 0; i < hist.n_bins(); ++i) {
    const double expected = double(hist.n_a) * double(hist.n_b) *
                            hist.bin_width_s(i) / duration;
    CHECK(std::abs(double(hist.counts[i]) - expected) < 5.0 * std::sqrt(expected));
    if (std::abs(curve.g2[i] - 1.0) > 5.0 * curve.err[i]) ++outliers_5sigma;
  }
  // Statistical soundness: far fewer than 1 % of bins deviate beyond 5 sigma.
  CHECK(outliers_5sigma < hist.n_bins() / 100 + 1);

  // Window average of a flat g2 is 1.
  CHECK(integrated_window_g2(hist, 50000) == doctest::Approx(1.0).epsilon(0.01));
  CHECK_THROWS_AS(integrated_window_g2(hist, 500000), std::invalid_argument);
}

TEST_CASE("normalization is invariant under duplicating the acquisition") {
  std::mt19937_64 rng(59);
  const double duration = 1.0;
  auto a = oracle::poisson_stream(2e4, duration, 1, rng);
  auto b = oracle::poisson_stream(2e4, duration, 1, rng);
  const auto base = normalize_g2(cross_correlation_histogram(a, b, 1, duration, 1000, 50000));

  // Append a copy of the run shifted by the full duration.
  const std::int64_t shift = 1000000000000;  // 1 s in ps
  std::vector<std::int64_t> a2 = a, b2 = b;
  for (auto t : a) a2.push_back(t + shift);
  for (auto t : b) b2.push_back(t + shift);
  const auto doubled =
      normalize_g2(cross_correlation_histogram(a2, b2, 1, 2 * duration, 1000, 50000));
  for (std::size_t i = 0; i < base.g2.size(); ++i) {
    CHECK(doubled.g2[i] == doctest::Approx(base.g2[i]).epsilon(1e-12));
  }
}

TEST_CASE("greedy one-to-one matching versus all-pairs counting") {
  // Two a-tags share one b-tag: the histogram sees two pairs, the greedy
  // coincidence counter consumes the b-tag once.
  const std::vector<std::int64_t> a = {0, 1000};
  const std::vector<std::int64_t> b = {500};
  const auto hist = cross_correlation_histogram(a, b, 1, 1.0, 2000, 2000);
  std::uint64_t pairs = 0;
  for (const auto c : hist.counts) pairs += c;
  CHECK(pairs == 2);
  CHECK(coincidences(a, b, 1, 1.0, 2000, 0).count == 1);

  // Spec'd hand example: only the first pair is within the window.
  const std::vector<std::int64_t> a2 = {0, 100000};
  const std::vector<std::int64_t> b2 = {1000, 200000};
  CHECK(coincidences(a2, b2, 1, 1.0, 8000, 0).count == 1);
}

TEST_CASE("heralded g2 on hand-built streams") {
  // Perfect single photons through an HBT splitter: every herald has exactly
  // one companion, alternating between s1 and s2, never both.
  const std::vector<std::int64_t> herald = {0, 100000, 200000, 300000};
  const std::vector<std::int64_t> s1 = {1000, 201000};
  const std::vector<std::int64_t> s2 = {101000, 301000};
  const auto perfect = heralded_g2c(herald, s1, s2, 1, 8000);
  CHECK(perfect.p_s1 == doctest::Approx(0.5));
  CHECK(perfect.p_s2 == doctest::Approx(0.5));
  CHECK(perfect.p_d == doctest::Approx(0.0));
  CHECK(perfect.g2c == doctest::Approx(0.0));
  CHECK(perfect.stat_error > 0.0);

  // A dead HBT output leaves the estimator undefined.
  CHECK_THROWS_AS(heralded_g2c(herald, s1, {}, 1, 8000), std::domain_error);

  // Six tags, one double event; brute enumeration gives 0.75.
  const std::vector<std::int64_t> herald3 = {0, 100000, 200000};
  const std::vector<std::int64_t> s1b = {1000, 201000};
  const std::vector<std::int64_t> s2b = {102000, 202000};
  const auto r = heralded_g2c(herald3, s1b, s2b, 1, 8000);
  CHECK(r.p_s1 == doctest::Approx(2.0 / 3.0));
  CHECK(r.p_s2 == doctest::Approx(2.0 / 3.0));
  CHECK(r.p_d == doctest::Approx(1.0 / 3.0));
  CHECK(r.g2c == doctest::Approx(0.75));
  const auto brute = oracle::brute_heralded(herald3, s1b, s2b, 1, 8000, 0);
  CHECK(r.g2c == doctest::Approx(brute.g2c()));

  CHECK_THROWS_AS(heralded_g2c({}, s1, s2, 1, 8000), std::domain_error);
}

TEST_CASE("heralded g2 of independent Poisson streams is 1") {
  std::mt19937_64 rng(71);
  const double duration = 5.0;
  const auto h = oracle::poisson_stream(1e6, duration, 1, rng);
  const auto s1 = oracle::poisson_stream(1e6, duration, 1, rng);
  const auto s2 = oracle::poisson_stream(1e6, duration, 1, rng);
  const auto r = heralded_g2c(h, s1, s2, 1, 8000);
  CHECK(std::abs(r.g2c - 1.0) < 3.0 * r.stat_error);
  CHECK(r.stat_error < 0.15);
}

TEST_CASE("stream summary composes rates, coincidences and efficiencies") {
  // Build a synthetic set: every idler tag has a signal partner 1 ns later on
  // channel 0; channel 1 stays empty.
  TimeTagStreamSet set;
  set.resolution_ps = 1;
  set.duration_s = 1.0;
  set.channels.resize(3);
  for (int i = 0; i < 1000; ++i) {
    const std::int64_t t = 1000000 * (i + 1);
    set.channels[2].push_back(t);
    set.channels[0].push_back(t + 1000);
    if (i % 2 == 0) set.channels[0].push_back(t + 500000);  // uncorrelated extras
  }
  std::sort(set.channels[0].begin(), set.channels[0].end());

  SummaryOptions opts;
  const auto s = stream_summary(set, opts, 1.0, 1.0);
  CHECK(s.rates.n_i_hz == doctest::Approx(1000.0));
  CHECK(s.rates.n_s_hz == doctest::Approx(1500.0));
  CHECK(s.rates.pair_rate_hz == doctest::Approx(1000.0));
  CHECK(s.offset_ns == doctest::Approx(1.0).epsilon(0.2));  // peak at +1 ns
  CHECK(s.efficiencies.eta_s == doctest::Approx(1.0));
  CHECK(s.efficiencies.eta_i == doctest::Approx(2.0 / 3.0));

  // Empty idler stream: efficiencies are undefined.
  set.channels[2].clear();
  CHECK_THROWS_AS(stream_summary(set, opts, 1.0, 1.0), std::domain_error);
}
