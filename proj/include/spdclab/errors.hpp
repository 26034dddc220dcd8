#ifndef SPDCLAB_ERRORS_HPP
#define SPDCLAB_ERRORS_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace spdc {

// Malformed container (bad magic, unsupported version, bad header fields).
struct FormatError : std::runtime_error {
  explicit FormatError(const std::string& msg) : std::runtime_error(msg) {}
};

// Physically damaged file: truncation mid-header/mid-record, or fewer records
// than the metadata declares. byte_offset points at the first bad byte.
struct CorruptionError : std::runtime_error {
  CorruptionError(const std::string& msg, std::uint64_t offset)
      : std::runtime_error(msg), byte_offset(offset) {}
  std::uint64_t byte_offset;
};

// Inconsistent stream content: timestamps out of order, channel index out of
// range. record_index is the offending record (or tag index).
struct DataError : std::runtime_error {
  DataError(const std::string& msg, std::uint64_t record)
      : std::runtime_error(msg), record_index(record) {}
  std::uint64_t record_index;
};

}  // namespace spdc

#endif
