#include "spdclab/correlator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "spdclab/errors.hpp"

namespace spdc {

namespace {

// Floor division for possibly negative numerators (denominator > 0).
std::int64_t fdiv(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if (a % b != 0 && a < 0) --q;
  return q;
}

void check_sorted(std::span<const std::int64_t> s, const char* name) {
  for (std::size_t i = 1; i < s.size(); ++i)
    if (s[i] < s[i - 1]) throw DataError(std::string(name) + ": stream not sorted", i);
}

// Number of multiples of `res` in the closed integer interval [lo, hi].
std::int64_t multiples_in(std::int64_t lo, std::int64_t hi, std::int64_t res) {
  return fdiv(hi, res) - fdiv(lo - 1, res);
}

struct BinSpec {
  std::int64_t bin = 0;
  std::int64_t half = 0;  // bin / 2
  int m = 0;              // bins per side
  std::int64_t cut_ticks = 0;
  std::int64_t res = 1;

  // Signed bin index for a lag in ticks; |index| may exceed m for lags just
  // past the cut (callers bound the scan by cut_ticks first).
  int index(std::int64_t lag_ticks) const {
    const std::int64_t lag_ps = lag_ticks * res;
    const std::int64_t idx = (std::abs(lag_ps) + half) / bin;
    return static_cast<int>(lag_ps < 0 ? -idx : idx);
  }
};

BinSpec make_bins(std::int64_t bin_width_ps, std::int64_t max_lag_ps, std::int64_t res) {
  if (bin_width_ps <= 0) throw std::invalid_argument("histogram: bin width must be > 0");
  if (max_lag_ps < bin_width_ps)
    throw std::invalid_argument("histogram: max lag must be >= bin width");
  if (res < 1) throw std::invalid_argument("histogram: resolution must be >= 1 ps");
  BinSpec spec;
  spec.bin = bin_width_ps;
  spec.half = bin_width_ps / 2;
  spec.res = res;
  const std::int64_t m = (max_lag_ps + bin_width_ps - 1) / bin_width_ps;
  if (m > 50'000'000)
    throw std::invalid_argument("histogram: more than 1e8 bins requested");
  spec.m = static_cast<int>(m);
  const std::int64_t cut_ps =
      static_cast<std::int64_t>(spec.m) * spec.bin + (spec.bin - 1) / 2;
  spec.cut_ticks = cut_ps / res;
  return spec;
}

// Two-pointer pass over a's index range [i_begin, i_end), counting lags into
// `counts`. b is fully visible; self-pairs (same index, same stream) skipped
// when requested.
void accumulate_range(std::span<const std::int64_t> a, std::span<const std::int64_t> b,
                      std::size_t i_begin, std::size_t i_end, const BinSpec& spec,
                      bool exclude_self, std::vector<std::uint64_t>& counts) {
  if (i_begin >= i_end) return;
  const std::int64_t cut = spec.cut_ticks;
  std::size_t lo = static_cast<std::size_t>(
      std::lower_bound(b.begin(), b.end(), a[i_begin] - cut) - b.begin());
  std::size_t hi = lo;
  for (std::size_t i = i_begin; i < i_end; ++i) {
    const std::int64_t t = a[i];
    while (lo < b.size() && b[lo] < t - cut) ++lo;
    if (hi < lo) hi = lo;
    while (hi < b.size() && b[hi] <= t + cut) ++hi;
    for (std::size_t j = lo; j < hi; ++j) {
      if (exclude_self && j == i) continue;
      counts[static_cast<std::size_t>(spec.index(b[j] - t) + spec.m)]++;
    }
  }
}

CorrelationHistogram histogram_impl(std::span<const std::int64_t> a,
                                    std::span<const std::int64_t> b,
                                    std::int64_t resolution_ps, double duration_s,
                                    std::int64_t bin_width_ps, std::int64_t max_lag_ps,
                                    std::size_t n_chunks, bool autocorr) {
  check_sorted(a, "histogram input a");
  if (!autocorr) check_sorted(b, "histogram input b");
  const BinSpec spec = make_bins(bin_width_ps, max_lag_ps, resolution_ps);

  CorrelationHistogram hist;
  hist.bin_width_ps = spec.bin;
  hist.half_bins = spec.m;
  hist.resolution_ps = resolution_ps;
  hist.duration_s = duration_s;
  hist.n_a = a.size();
  hist.n_b = b.size();
  hist.autocorrelation = autocorr;
  hist.counts.assign(static_cast<std::size_t>(hist.n_bins()), 0);

  n_chunks = std::clamp<std::size_t>(n_chunks, 1, std::max<std::size_t>(a.size(), 1));
  if (n_chunks == 1) {
    accumulate_range(a, b, 0, a.size(), spec, autocorr, hist.counts);
    return hist;
  }

  // Partial histograms per chunk, computed by a small worker pool and merged
  // in chunk order: counts are bit-identical for any chunking or thread count.
  std::vector<std::vector<std::uint64_t>> partials(
      n_chunks, std::vector<std::uint64_t>(hist.counts.size(), 0));
  std::atomic<std::size_t> next_chunk{0};
  const std::size_t per_chunk = (a.size() + n_chunks - 1) / n_chunks;
  auto worker = [&]() {
    for (;;) {
      const std::size_t c = next_chunk.fetch_add(1);
      if (c >= n_chunks) return;
      const std::size_t i0 = c * per_chunk;
      const std::size_t i1 = std::min(a.size(), i0 + per_chunk);
      accumulate_range(a, b, i0, i1, spec, autocorr, partials[c]);
    }
  };
  const std::size_t hw = std::max<std::size_t>(1, std::thread::hardware_concurrency());
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w + 1 < std::min(hw, n_chunks); ++w) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (const auto& part : partials)
    for (std::size_t k = 0; k < part.size(); ++k) hist.counts[k] += part[k];
  return hist;
}

}  // namespace

double CorrelationHistogram::bin_width_s(int i) const {
  const int k = i - half_bins;
  const std::int64_t inner = bin_width_ps - 1 - bin_width_ps / 2;
  std::int64_t lo, hi;
  if (k == 0) {
    lo = -inner;
    hi = inner;
  } else {
    const std::int64_t kk = std::abs(static_cast<std::int64_t>(k));
    lo = kk * bin_width_ps - bin_width_ps / 2;
    hi = kk * bin_width_ps + inner;
  }
  const std::int64_t n_lags = multiples_in(lo, hi, resolution_ps);
  return static_cast<double>(n_lags) * static_cast<double>(resolution_ps) * 1e-12;
}

CorrelationHistogram cross_correlation_histogram(
    std::span<const std::int64_t> a, std::span<const std::int64_t> b,
    std::int64_t resolution_ps, double duration_s, std::int64_t bin_width_ps,
    std::int64_t max_lag_ps, std::size_t n_chunks) {
  return histogram_impl(a, b, resolution_ps, duration_s, bin_width_ps, max_lag_ps,
                        n_chunks, false);
}

CorrelationHistogram autocorrelation_histogram(std::span<const std::int64_t> a,
                                               std::int64_t resolution_ps,
                                               double duration_s,
                                               std::int64_t bin_width_ps,
                                               std::int64_t max_lag_ps,
                                               std::size_t n_chunks) {
  return histogram_impl(a, a, resolution_ps, duration_s, bin_width_ps, max_lag_ps,
                        n_chunks, true);
}

G2Curve normalize_g2(const CorrelationHistogram& hist) {
  if (hist.n_a == 0 || hist.n_b == 0)
    throw std::domain_error("normalize_g2: zero total counts");
  if (!(hist.duration_s > 0.0))
    throw std::domain_error("normalize_g2: zero duration");

  G2Curve curve;
  const int n = hist.n_bins();
  curve.lag_ns.resize(n);
  curve.g2.resize(n);
  curve.err.resize(n);
  const double pair_rate =
      static_cast<double>(hist.n_a) * static_cast<double>(hist.n_b) / hist.duration_s;
  for (int i = 0; i < n; ++i) {
    const double scale = 1.0 / (pair_rate * hist.bin_width_s(i));
    const double c = static_cast<double>(hist.counts[static_cast<std::size_t>(i)]);
    curve.lag_ns[i] = static_cast<double>(hist.bin_center_ps(i)) * 1e-3;
    curve.g2[i] = c * scale;
    curve.err[i] = std::sqrt(c) * scale;
  }
  return curve;
}

std::int64_t peak_lag_ps(const CorrelationHistogram& hist) {
  std::uint64_t best_count = 0;
  std::int64_t best_lag = 0;
  for (int i = 0; i < hist.n_bins(); ++i) {
    const std::uint64_t c = hist.counts[static_cast<std::size_t>(i)];
    const std::int64_t lag = hist.bin_center_ps(i);
    if (c > best_count ||
        (c == best_count && std::abs(lag) < std::abs(best_lag))) {
      best_count = c;
      best_lag = lag;
    }
  }
  return best_lag;
}

CoincidenceResult coincidences(std::span<const std::int64_t> a,
                               std::span<const std::int64_t> b,
                               std::int64_t resolution_ps, double duration_s,
                               std::int64_t window_ps, std::int64_t offset_ps) {
  if (window_ps <= 0) throw std::invalid_argument("coincidences: window must be > 0");
  if (resolution_ps < 1)
    throw std::invalid_argument("coincidences: resolution must be >= 1 ps");
  check_sorted(a, "coincidences input a");
  check_sorted(b, "coincidences input b");

  // Tick bounds of the accepted lag t_b - t_a.
  const std::int64_t dt_min = -fdiv(window_ps / 2 - offset_ps, resolution_ps);
  const std::int64_t dt_max = fdiv(offset_ps + window_ps / 2, resolution_ps);

  CoincidenceResult out;
  out.window_ps = window_ps;
  out.offset_ps = offset_ps;
  std::size_t next = 0;
  for (const std::int64_t t : a) {
    while (next < b.size() && b[next] < t + dt_min) ++next;
    if (next < b.size() && b[next] <= t + dt_max) {
      ++out.count;
      ++next;
    }
  }
  out.rate_hz = duration_s > 0.0 ? static_cast<double>(out.count) / duration_s : 0.0;
  return out;
}

HeraldedG2Result heralded_g2c(std::span<const std::int64_t> herald,
                              std::span<const std::int64_t> s1,
                              std::span<const std::int64_t> s2,
                              std::int64_t resolution_ps, std::int64_t window_ps,
                              std::int64_t offset_ps) {
  if (window_ps <= 0) throw std::invalid_argument("heralded_g2c: window must be > 0");
  if (resolution_ps < 1)
    throw std::invalid_argument("heralded_g2c: resolution must be >= 1 ps");
  check_sorted(herald, "heralded_g2c herald");
  check_sorted(s1, "heralded_g2c s1");
  check_sorted(s2, "heralded_g2c s2");
  if (herald.empty()) throw std::domain_error("heralded_g2c: no heralds");

  const std::int64_t dt_min = -fdiv(window_ps / 2 - offset_ps, resolution_ps);
  const std::int64_t dt_max = fdiv(offset_ps + window_ps / 2, resolution_ps);

  std::uint64_t c1 = 0, c2 = 0, cd = 0;
  std::size_t lo1 = 0, lo2 = 0;
  for (const std::int64_t h : herald) {
    while (lo1 < s1.size() && s1[lo1] < h + dt_min) ++lo1;
    while (lo2 < s2.size() && s2[lo2] < h + dt_min) ++lo2;
    const bool hit1 = lo1 < s1.size() && s1[lo1] <= h + dt_max;
    const bool hit2 = lo2 < s2.size() && s2[lo2] <= h + dt_max;
    c1 += hit1;
    c2 += hit2;
    cd += hit1 && hit2;
  }

  HeraldedG2Result out;
  out.n_heralds = herald.size();
  out.window_ps = window_ps;
  out.offset_ps = offset_ps;
  const double n = static_cast<double>(out.n_heralds);
  out.p_s1 = static_cast<double>(c1) / n;
  out.p_s2 = static_cast<double>(c2) / n;
  out.p_d = static_cast<double>(cd) / n;
  if (out.p_s1 <= 0.0 || out.p_s2 <= 0.0)
    throw std::domain_error("heralded_g2c: no single counts, result undefined");
  out.g2c = out.p_d / (out.p_s1 * out.p_s2);

  const double pd_eff = static_cast<double>(std::max<std::uint64_t>(cd, 1)) / n;
  const double rel2 = (1.0 - pd_eff) / (n * pd_eff) +
                      (1.0 - out.p_s1) / (n * out.p_s1) +
                      (1.0 - out.p_s2) / (n * out.p_s2);
  const double scale = cd > 0 ? out.g2c : pd_eff / (out.p_s1 * out.p_s2);
  out.stat_error = scale * std::sqrt(rel2);
  return out;
}

double integrated_window_g2(const CorrelationHistogram& hist,
                            std::int64_t half_window_ps) {
  if (half_window_ps <= 0)
    throw std::invalid_argument("integrated_window_g2: half window must be > 0");
  if (half_window_ps > hist.max_lag_ps())
    throw std::invalid_argument("integrated_window_g2: window exceeds histogram range");
  const G2Curve curve = normalize_g2(hist);
  double sum = 0.0;
  int n = 0;
  for (int i = 0; i < hist.n_bins(); ++i) {
    if (std::abs(hist.bin_center_ps(i)) <= half_window_ps) {
      sum += curve.g2[static_cast<std::size_t>(i)];
      ++n;
    }
  }
  return sum / n;
}

std::vector<std::int64_t> merge_channels(const TimeTagStreamSet& streams,
                                         const std::vector<std::size_t>& channels) {
  std::vector<std::int64_t> merged;
  std::size_t total = 0;
  for (std::size_t c : channels) total += streams.channel(c).size();
  merged.reserve(total);
  for (std::size_t c : channels) {
    const auto ch = streams.channel(c);
    merged.insert(merged.end(), ch.begin(), ch.end());
  }
  std::sort(merged.begin(), merged.end());
  return merged;
}

StreamSummary stream_summary(const TimeTagStreamSet& streams, const SummaryOptions& opts,
                             double eta_det, double pump_power_mw) {
  if (!(streams.duration_s > 0.0))
    throw std::invalid_argument("stream_summary: stream duration must be > 0");
  if (opts.signal_channels.empty())
    throw std::invalid_argument("stream_summary: no signal channels");

  const auto idler = streams.channel(opts.idler_channel);
  const std::vector<std::int64_t> signal = merge_channels(streams, opts.signal_channels);
  const double t = streams.duration_s;

  StreamSummary out;
  out.window_ns = opts.window_ns;
  out.rates.duration_s = t;
  out.rates.n_s_hz = static_cast<double>(signal.size()) / t;
  out.rates.n_i_hz = static_cast<double>(idler.size()) / t;

  const std::int64_t window_ps = std::llround(opts.window_ns * 1e3);
  std::int64_t offset_ps = 0;
  if (opts.offset_ns) {
    offset_ps = std::llround(*opts.offset_ns * 1e3);
  } else if (!idler.empty() && !signal.empty()) {
    // Center the coincidence window on the cross-correlation peak.
    const auto hist = cross_correlation_histogram(idler, signal, streams.resolution_ps,
                                                  t, 162, 50'000);
    offset_ps = peak_lag_ps(hist);
  }
  out.offset_ns = static_cast<double>(offset_ps) * 1e-3;

  const CoincidenceResult r =
      coincidences(idler, signal, streams.resolution_ps, t, window_ps, offset_ps);
  out.rates.pair_rate_hz = r.rate_hz;
  out.efficiencies = efficiencies_from_rates(out.rates, eta_det, pump_power_mw);
  return out;
}

}  // namespace spdc
