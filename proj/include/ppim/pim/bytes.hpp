#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ppim/error.hpp"

namespace ppim::pim {

inline void append_le32(std::vector<std::uint8_t>& out, std::span<const std::uint32_t> values) {
  out.reserve(out.size() + 4 * values.size());
  for (auto v : values)
    for (int s = 0; s < 32; s += 8) out.push_back(static_cast<std::uint8_t>(v >> s));
}

inline std::vector<std::uint8_t> to_le32(std::span<const std::uint32_t> values) {
  std::vector<std::uint8_t> out;
  append_le32(out, values);
  return out;
}

inline std::vector<std::uint32_t> from_le32(std::span<const std::uint8_t> bytes) {
  if (bytes.size() % 4 != 0) fail(ErrorCode::malformed_input, "byte length not a multiple of 4");
  std::vector<std::uint32_t> out(bytes.size() / 4);
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = static_cast<std::uint32_t>(bytes[4 * i]) | static_cast<std::uint32_t>(bytes[4 * i + 1]) << 8 |
             static_cast<std::uint32_t>(bytes[4 * i + 2]) << 16 | static_cast<std::uint32_t>(bytes[4 * i + 3]) << 24;
  return out;
}

}  // namespace ppim::pim
