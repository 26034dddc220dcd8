#include "spdclab/tagio.hpp"

#include <array>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>

namespace spdc {

namespace {

constexpr char kMagic[4] = {'P', 'T', 'T', '1'};
constexpr std::uint16_t kVersion = 1;
constexpr std::size_t kFixedHeaderSize = 20;
constexpr std::size_t kRecordSize = 12;
constexpr std::size_t kIoBufferSize = 1 << 20;

void put_u16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
}

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint16_t get_u16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t get_u32(const unsigned char* p) {
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

std::uint64_t get_u64(const unsigned char* p) {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

}  // namespace

void write_streams(const std::string& path, const TimeTagStreamSet& streams) {
  if (streams.channels.empty())
    throw std::invalid_argument("write_streams: at least one channel required");
  if (streams.channels.size() > 256)
    throw std::invalid_argument("write_streams: more than 256 channels");
  if (streams.resolution_ps < 1)
    throw std::invalid_argument("write_streams: resolution must be >= 1 ps");
  for (const auto& ch : streams.channels) {
    for (std::size_t i = 0; i < ch.size(); ++i) {
      if (ch[i] < 0) throw std::invalid_argument("write_streams: negative timestamp");
      if (i > 0 && ch[i] < ch[i - 1])
        throw std::invalid_argument("write_streams: channel tags not sorted");
    }
  }

  nlohmann::json meta = streams.metadata;
  meta["duration_s"] = streams.duration_s;
  meta["n_records"] = streams.total_tags();
  const std::string meta_str = meta.dump();
  if (meta_str.size() > std::numeric_limits<std::uint32_t>::max())
    throw std::invalid_argument("write_streams: metadata too large");

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("write_streams: cannot open " + path);

  std::string buf;
  buf.reserve(kIoBufferSize + kRecordSize);
  buf.append(kMagic, 4);
  put_u16(buf, kVersion);
  put_u16(buf, static_cast<std::uint16_t>(streams.channels.size()));
  put_u64(buf, static_cast<std::uint64_t>(streams.resolution_ps));
  put_u32(buf, static_cast<std::uint32_t>(meta_str.size()));
  buf += meta_str;

  // Merge channels in (timestamp, channel) order. Channel counts are small,
  // so a linear scan for the minimum is fine.
  const std::size_t n_ch = streams.channels.size();
  std::vector<std::size_t> pos(n_ch, 0);
  for (;;) {
    int best = -1;
    std::int64_t best_t = 0;
    for (std::size_t c = 0; c < n_ch; ++c) {
      if (pos[c] >= streams.channels[c].size()) continue;
      const std::int64_t t = streams.channels[c][pos[c]];
      if (best < 0 || t < best_t) {
        best = static_cast<int>(c);
        best_t = t;
      }
    }
    if (best < 0) break;
    put_u64(buf, static_cast<std::uint64_t>(best_t));
    buf.push_back(static_cast<char>(best));
    buf.append(3, '\0');
    ++pos[static_cast<std::size_t>(best)];
    if (buf.size() >= kIoBufferSize) {
      out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
      buf.clear();
    }
  }
  if (!buf.empty()) out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  out.flush();
  if (!out) throw std::runtime_error("write_streams: write failed for " + path);
}

TimeTagStreamSet read_streams(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read_streams: cannot open " + path);
  in.seekg(0, std::ios::end);
  const std::uint64_t file_size = static_cast<std::uint64_t>(in.tellg());
  in.seekg(0);

  if (file_size < 4) throw CorruptionError("truncated header", file_size);
  std::array<unsigned char, kFixedHeaderSize> hdr{};
  in.read(reinterpret_cast<char*>(hdr.data()),
          static_cast<std::streamsize>(std::min<std::uint64_t>(file_size, kFixedHeaderSize)));
  if (std::memcmp(hdr.data(), kMagic, 4) != 0)
    throw FormatError("read_streams: bad magic, not a PTT1 file");
  if (file_size < kFixedHeaderSize) throw CorruptionError("truncated header", file_size);

  const std::uint16_t version = get_u16(hdr.data() + 4);
  if (version != kVersion)
    throw FormatError("read_streams: unsupported PTT1 version " + std::to_string(version));
  const std::uint16_t channel_count = get_u16(hdr.data() + 6);
  if (channel_count < 1) throw FormatError("read_streams: channel_count must be >= 1");
  const std::uint64_t resolution = get_u64(hdr.data() + 8);
  if (resolution < 1) throw FormatError("read_streams: resolution must be >= 1 ps");
  const std::uint32_t meta_len = get_u32(hdr.data() + 16);

  if (file_size < kFixedHeaderSize + meta_len)
    throw CorruptionError("truncated metadata", file_size);
  std::string meta_str(meta_len, '\0');
  in.read(meta_str.data(), meta_len);

  nlohmann::json meta = nlohmann::json::parse(meta_str, nullptr, false);
  if (meta.is_discarded()) throw FormatError("read_streams: metadata is not valid JSON");

  const std::uint64_t data_start = kFixedHeaderSize + meta_len;
  const std::uint64_t data_bytes = file_size - data_start;
  if (data_bytes % kRecordSize != 0)
    throw CorruptionError("truncated record",
                          data_start + (data_bytes / kRecordSize) * kRecordSize);
  const std::uint64_t n_records = data_bytes / kRecordSize;

  TimeTagStreamSet set;
  set.resolution_ps = static_cast<std::int64_t>(resolution);
  set.channels.assign(channel_count, {});
  set.metadata = meta;

  std::vector<unsigned char> buf(kIoBufferSize - kIoBufferSize % kRecordSize);
  std::uint64_t record = 0;
  std::int64_t prev_t = -1;
  while (record < n_records) {
    const std::uint64_t want = std::min<std::uint64_t>(buf.size(), (n_records - record) * kRecordSize);
    in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(want));
    if (static_cast<std::uint64_t>(in.gcount()) != want)
      throw std::runtime_error("read_streams: read failed for " + path);
    for (std::uint64_t off = 0; off < want; off += kRecordSize, ++record) {
      const unsigned char* p = buf.data() + off;
      const std::uint64_t raw_t = get_u64(p);
      const std::uint8_t ch = p[8];
      if (raw_t > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max()))
        throw DataError("timestamp out of range", record);
      const auto t = static_cast<std::int64_t>(raw_t);
      if (t < prev_t) throw DataError("timestamps not monotone", record);
      if (ch >= channel_count) throw DataError("channel index out of range", record);
      prev_t = t;
      set.channels[ch].push_back(t);
    }
  }

  if (meta.contains("n_records") && meta["n_records"].is_number_unsigned()) {
    const std::uint64_t declared = meta["n_records"].get<std::uint64_t>();
    if (declared != n_records)
      throw CorruptionError("record count mismatch: metadata declares " +
                                std::to_string(declared) + ", file holds " +
                                std::to_string(n_records),
                            file_size);
  }
  if (meta.contains("duration_s") && meta["duration_s"].is_number()) {
    set.duration_s = meta["duration_s"].get<double>();
  } else if (prev_t >= 0) {
    set.duration_s = static_cast<double>(prev_t) * static_cast<double>(resolution) * 1e-12;
  }
  return set;
}

void export_csv(const TimeTagStreamSet& streams, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("export_csv: cannot open " + path);
  out << "timestamp_ps,channel\n";

  const std::size_t n_ch = streams.channels.size();
  std::vector<std::size_t> pos(n_ch, 0);
  for (;;) {
    int best = -1;
    std::int64_t best_t = 0;
    for (std::size_t c = 0; c < n_ch; ++c) {
      if (pos[c] >= streams.channels[c].size()) continue;
      const std::int64_t t = streams.channels[c][pos[c]];
      if (best < 0 || t < best_t) {
        best = static_cast<int>(c);
        best_t = t;
      }
    }
    if (best < 0) break;
    out << best_t * streams.resolution_ps << ',' << best << '\n';
    ++pos[static_cast<std::size_t>(best)];
  }
  out.flush();
  if (!out) throw std::runtime_error("export_csv: write failed for " + path);
}

}  // namespace spdc
