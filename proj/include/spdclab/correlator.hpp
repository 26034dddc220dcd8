#ifndef SPDCLAB_CORRELATOR_HPP
#define SPDCLAB_CORRELATOR_HPP

//
// Coincidence counting and correlation analysis of sorted time-tag streams.
//
// All pairwise operations run as a sliding-window two-pointer pass over the
// sorted inputs, O(n_a + n_b + pairs_in_range), and count exactly (no start-
// stop approximation). Histogram bins are centered on integer multiples of
// the bin width: bin k covers lags in [k*b - b/2, k*b + b/2), which makes the
// histogram exactly mirror-symmetric under exchange of the two inputs.
//

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "spdclab/pair_model.hpp"
#include "spdclab/time_tags.hpp"

namespace spdc {

struct CorrelationHistogram {
  std::int64_t bin_width_ps = 0;
  int half_bins = 0;  // bins run k = -half_bins .. +half_bins
  std::int64_t resolution_ps = 1;
  double duration_s = 0.0;
  std::uint64_t n_a = 0;  // total tags of input a (not only in-range)
  std::uint64_t n_b = 0;
  bool autocorrelation = false;  // same stream on both inputs, self-pairs excluded
  std::vector<std::uint64_t> counts;

  int n_bins() const { return 2 * half_bins + 1; }
  std::int64_t bin_center_ps(int i) const {
    return static_cast<std::int64_t>(i - half_bins) * bin_width_ps;
  }
  // Largest |lag| accepted into the outermost bins.
  std::int64_t max_lag_ps() const {
    return static_cast<std::int64_t>(half_bins) * bin_width_ps + (bin_width_ps - 1) / 2;
  }
  // Exact width of bin i in seconds, counting representable lags (multiples of
  // the tick resolution). The central bin spans one tick fewer than the rest
  // when the bin width is an even number of ticks.
  double bin_width_s(int i) const;
};

// Normalized g2 curve with per-bin statistical errors.
struct G2Curve {
  std::vector<double> lag_ns;
  std::vector<double> g2;
  std::vector<double> err;
};

struct CoincidenceResult {
  std::uint64_t count = 0;
  double rate_hz = 0.0;
  std::int64_t window_ps = 0;
  std::int64_t offset_ps = 0;
};

struct HeraldedG2Result {
  double p_s1 = 0.0;
  double p_s2 = 0.0;
  double p_d = 0.0;
  double g2c = 0.0;
  std::uint64_t n_heralds = 0;
  double stat_error = 0.0;
  std::int64_t window_ps = 0;
  std::int64_t offset_ps = 0;
};

struct StreamSummary {
  RateSummary rates;
  EfficiencySummary efficiencies;
  double window_ns = 0.0;
  double offset_ns = 0.0;
};

// Histogram of all ordered lags t_b - t_a within +-max_lag. `n_chunks` splits
// stream a into ranges whose partial histograms are merged in index order, so
// the result is bit-identical for any chunk count.
CorrelationHistogram cross_correlation_histogram(
    std::span<const std::int64_t> a, std::span<const std::int64_t> b,
    std::int64_t resolution_ps, double duration_s, std::int64_t bin_width_ps,
    std::int64_t max_lag_ps, std::size_t n_chunks = 1);

// Autocorrelation of one stream with itself; the i == j self-pairs are
// excluded, all other ordered pairs are counted.
CorrelationHistogram autocorrelation_histogram(std::span<const std::int64_t> a,
                                               std::int64_t resolution_ps,
                                               double duration_s,
                                               std::int64_t bin_width_ps,
                                               std::int64_t max_lag_ps,
                                               std::size_t n_chunks = 1);

// g2_k = counts_k * T / (n_a * n_b * w_k); err_k = sqrt(counts_k) scaled the
// same way. Throws if totals or duration are zero.
G2Curve normalize_g2(const CorrelationHistogram& hist);

// Lag (bin center) of the highest-count bin; ties resolve to the bin nearer
// zero lag. Zero for an empty histogram.
std::int64_t peak_lag_ps(const CorrelationHistogram& hist);

// One-to-one coincidence counting: pairs with t_b - t_a - offset in
// [-window/2, +window/2]. Matching is greedy in time order: each a-tag takes
// the earliest not-yet-matched b-tag inside its window, approximating what
// hardware coincidence logic does. (Histogram operations, in contrast, count
// all pairs.)
CoincidenceResult coincidences(std::span<const std::int64_t> a,
                               std::span<const std::int64_t> b,
                               std::int64_t resolution_ps, double duration_s,
                               std::int64_t window_ps, std::int64_t offset_ps = 0);

// Conditional (heralded) second-order autocorrelation g2_c = P_d / (P_s1 P_s2)
// for non-number-resolving detection: per herald, P_s1/P_s2 are the fractions
// of heralds with at least one tag on s1/s2 inside the window centered at
// herald + offset, P_d with at least one on both. The statistical error comes
// from binomial propagation with a one-count floor on the double term.
HeraldedG2Result heralded_g2c(std::span<const std::int64_t> herald,
                              std::span<const std::int64_t> s1,
                              std::span<const std::int64_t> s2,
                              std::int64_t resolution_ps, std::int64_t window_ps,
                              std::int64_t offset_ps = 0);

// Mean of the normalized g2 values over all bins whose centers lie in
// [-half_window, +half_window].
double integrated_window_g2(const CorrelationHistogram& hist,
                            std::int64_t half_window_ps);

struct SummaryOptions {
  std::vector<std::size_t> signal_channels = {0, 1};
  std::size_t idler_channel = 2;
  double window_ns = 8.0;
  // Window center relative to the idler tags; when unset it is taken from the
  // signal-idler cross-correlation peak (reported in the result).
  std::optional<double> offset_ns;
};

// Singles rates, one-to-one coincidence rate, and the full rate-to-efficiency
// algebra for a recorded stream set.
StreamSummary stream_summary(const TimeTagStreamSet& streams, const SummaryOptions& opts,
                             double eta_det, double pump_power_mw);

// Sorted merge of several channels of a stream set into one tag vector.
std::vector<std::int64_t> merge_channels(const TimeTagStreamSet& streams,
                                         const std::vector<std::size_t>& channels);

}  // namespace spdc

#endif
