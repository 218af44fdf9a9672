#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ppim/error.hpp"

namespace ppim::compress {

// Vbyte: 7 payload bits per byte, least-significant group first. Every byte
// of a value except the last has its top bit set.

constexpr std::size_t vbyte_size(std::uint32_t v) noexcept {
  if (v < (1u << 7)) return 1;
  if (v < (1u << 14)) return 2;
  if (v < (1u << 21)) return 3;
  if (v < (1u << 28)) return 4;
  return 5;
}

inline std::size_t vbyte_size(std::span<const std::uint32_t> values) noexcept {
  std::size_t n = 0;
  for (auto v : values) n += vbyte_size(v);
  return n;
}

inline void vbyte_append(std::vector<std::uint8_t>& out, std::uint32_t v) {
  while (v >= 0x80) {
    out.push_back(static_cast<std::uint8_t>(v | 0x80));
    v >>= 7;
  }
  out.push_back(static_cast<std::uint8_t>(v));
}

inline void vbyte_append(std::vector<std::uint8_t>& out, std::span<const std::uint32_t> values) {
  out.reserve(out.size() + vbyte_size(values));
  for (auto v : values) vbyte_append(out, v);
}

inline std::vector<std::uint8_t> vbyte_encode(std::span<const std::uint32_t> values) {
  std::vector<std::uint8_t> out;
  vbyte_append(out, values);
  return out;
}

/// Reads one value starting at `pos`, advancing it. Rejects truncation and
/// encodings longer than five bytes or wider than 32 bits.
inline std::uint32_t vbyte_read(std::span<const std::uint8_t> bytes, std::size_t& pos) {
  std::uint64_t value = 0;
  for (unsigned i = 0; i < 5; ++i) {
    if (pos >= bytes.size()) fail(ErrorCode::malformed_input, "truncated vbyte value");
    const std::uint8_t b = bytes[pos++];
    value |= static_cast<std::uint64_t>(b & 0x7F) << (7 * i);
    if ((b & 0x80) == 0) {
      if (value > 0xFFFFFFFFull) fail(ErrorCode::malformed_input, "vbyte value exceeds 32 bits");
      return static_cast<std::uint32_t>(value);
    }
  }
  fail(ErrorCode::malformed_input, "vbyte value longer than 5 bytes");
}

/// Decodes exactly `count` values into `out`, which must have room for them.
inline void vbyte_decode_into(std::span<const std::uint8_t> bytes, std::span<std::uint32_t> out) {
  std::size_t pos = 0;
  for (auto& v : out) v = vbyte_read(bytes, pos);
  if (pos != bytes.size())
    fail(ErrorCode::malformed_input, std::to_string(bytes.size() - pos) + " trailing bytes after " +
                                         std::to_string(out.size()) + " values");
}

inline std::vector<std::uint32_t> vbyte_decode(std::span<const std::uint8_t> bytes, std::size_t count) {
  // Every value takes at least one byte.
  if (count > bytes.size()) fail(ErrorCode::malformed_input, "fewer bytes than expected values");
  std::vector<std::uint32_t> out(count);
  vbyte_decode_into(bytes, out);
  return out;
}

/// Uncompressed size divided by compressed size.
inline double compression_ratio(std::uint64_t original_bytes, std::uint64_t compressed_bytes) {
  if (compressed_bytes == 0) fail(ErrorCode::invalid_argument, "compressed size must be positive");
  return static_cast<double>(original_bytes) / static_cast<double>(compressed_bytes);
}

}  // namespace ppim::compress
