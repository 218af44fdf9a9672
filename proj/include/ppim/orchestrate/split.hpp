#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

#include "ppim/error.hpp"
#include "ppim/pim/tasklets.hpp"

namespace ppim::orchestrate {

struct Chunk {
  std::vector<std::uint32_t> values;  // padded to the common chunk size
  std::size_t logical = 0;            // leading elements that are real data
};

/// Splits `data` into `n` equal chunks of ceil(|data| / n) elements, rounded
/// up to a whole number of `granule`s, zero-padding the tail. A nonzero
/// `chunk_elements` forces that size instead.
inline std::vector<Chunk> split(std::span<const std::uint32_t> data, std::size_t n, std::size_t granule = 1,
                                std::size_t chunk_elements = 0) {
  if (n < 1) fail(ErrorCode::invalid_argument, "cannot split into zero chunks");
  if (granule < 1) fail(ErrorCode::invalid_argument, "granule must be at least 1");
  std::size_t size = chunk_elements;
  if (size == 0) {
    size = static_cast<std::size_t>(pim::ceil_div(data.size(), n));
    size = static_cast<std::size_t>(pim::ceil_div(size, granule)) * granule;
  } else if (size % granule != 0 || size * n < data.size()) {
    fail(ErrorCode::config_invalid, "chunk size " + std::to_string(size) + " cannot hold the data in " +
                                        std::to_string(n) + " chunks of whole units");
  }
  std::vector<Chunk> chunks(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t begin = std::min(i * size, data.size());
    const std::size_t end = std::min(begin + size, data.size());
    chunks[i].values.assign(size, 0);
    std::copy(data.begin() + static_cast<std::ptrdiff_t>(begin), data.begin() + static_cast<std::ptrdiff_t>(end),
              chunks[i].values.begin());
    chunks[i].logical = end - begin;
  }
  return chunks;
}

}  // namespace ppim::orchestrate
