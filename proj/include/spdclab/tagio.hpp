#ifndef SPDCLAB_TAGIO_HPP
#define SPDCLAB_TAGIO_HPP

//
// PTT1: a little-endian binary time-tag container.
//
//   offset  size  field
//   0       4     magic "PTT1"
//   4       2     version (= 1), uint16
//   6       2     channel_count, uint16
//   8       8     resolution_ps, uint64 (picoseconds per tick, >= 1)
//   16      4     metadata_len, uint32
//   20      n     metadata, UTF-8 JSON
//   20+n    12*k  records
//
// Each record is 12 bytes: uint64 timestamp in ticks, uint8 channel, 3 zero
// bytes reserved. Records are sorted by (timestamp, channel); timestamps are
// non-decreasing across the file. The writer embeds "n_records" in the
// metadata so truncation at a record boundary is also detectable.
//

#include <cstdint>
#include <string>

#include "spdclab/errors.hpp"
#include "spdclab/time_tags.hpp"

namespace spdc {

// Writes the stream set as one merged PTT1 file. Records are merged across
// channels in (timestamp, channel) order; byte-exact for identical inputs.
// The set's metadata is written with "duration_s" and "n_records" added.
void write_streams(const std::string& path, const TimeTagStreamSet& streams);

// Streaming reader; exact inverse of write_streams. Memory use is constant in
// the file size apart from the returned tag vectors.
TimeTagStreamSet read_streams(const std::string& path);

// CSV export: header "timestamp_ps,channel", one row per tag in merged order,
// timestamps converted to picoseconds.
void export_csv(const TimeTagStreamSet& streams, const std::string& path);

}  // namespace spdc

#endif
