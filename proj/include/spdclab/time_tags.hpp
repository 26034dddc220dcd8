#ifndef SPDCLAB_TIME_TAGS_HPP
#define SPDCLAB_TIME_TAGS_HPP

//
// Time-tagged detection streams: the common currency between the simulator,
// the PTT1 file layer, and the correlator. Timestamps are integer ticks of
// `resolution_ps` picoseconds; each channel's tags are kept sorted.
//

#include <cstdint>
#include <span>
#include <vector>

#include "json.hpp"

namespace spdc {

struct TimeTagStreamSet {
  std::int64_t resolution_ps = 1;
  double duration_s = 0.0;
  // channels[c] holds the sorted tick timestamps of channel c.
  std::vector<std::vector<std::int64_t>> channels;
  nlohmann::json metadata = nlohmann::json::object();

  std::size_t channel_count() const { return channels.size(); }
  std::span<const std::int64_t> channel(std::size_t c) const { return channels.at(c); }
  std::uint64_t total_tags() const {
    std::uint64_t n = 0;
    for (const auto& ch : channels) n += ch.size();
    return n;
  }
};

inline double ticks_to_ns(std::int64_t ticks, std::int64_t resolution_ps) {
  return static_cast<double>(ticks) * static_cast<double>(resolution_ps) * 1e-3;
}

inline std::int64_t ns_to_ticks(double t_ns, std::int64_t resolution_ps) {
  return static_cast<std::int64_t>(
      std::llround(t_ns * 1e3 / static_cast<double>(resolution_ps)));
}

}  // namespace spdc

#endif
