#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ppim/compress/vbyte.hpp"
#include "ppim/error.hpp"

namespace ppim::compress {

/// Fixed-size block deduplication. Each distinct block is kept once, in
/// order of first appearance; `refs` rebuilds the original block sequence.
struct DedupIndex {
  std::size_t block_size = 1;
  std::vector<std::vector<std::uint32_t>> unique_blocks;
  std::vector<std::uint32_t> refs;
  std::vector<std::uint32_t> tail;

  std::size_t reconstructed_size() const noexcept { return refs.size() * block_size + tail.size(); }
  bool operator==(const DedupIndex&) const = default;
};

namespace detail {

inline std::uint64_t hash_block(std::span<const std::uint32_t> block) noexcept {
  // FNV-1a over the little-endian bytes.
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (auto v : block) {
    for (int s = 0; s < 32; s += 8) {
      h ^= (v >> s) & 0xFF;
      h *= 0x100000001b3ull;
    }
  }
  return h;
}

}  // namespace detail

inline DedupIndex dedup_encode(std::span<const std::uint32_t> values, std::size_t block_size) {
  if (block_size == 0) fail(ErrorCode::invalid_argument, "dedup block_size must be at least 1");
  DedupIndex index;
  index.block_size = block_size;
  const std::size_t n_full = values.size() / block_size;
  index.refs.reserve(n_full);
  // Hash buckets hold candidate unique ids; a hit is confirmed by comparing content.
  std::unordered_multimap<std::uint64_t, std::uint32_t> seen;
  for (std::size_t b = 0; b < n_full; ++b) {
    const auto block = values.subspan(b * block_size, block_size);
    const std::uint64_t h = detail::hash_block(block);
    std::uint32_t ref = static_cast<std::uint32_t>(index.unique_blocks.size());
    auto [lo, hi] = seen.equal_range(h);
    for (auto it = lo; it != hi; ++it) {
      const auto& cand = index.unique_blocks[it->second];
      if (std::equal(cand.begin(), cand.end(), block.begin())) {
        ref = it->second;
        break;
      }
    }
    if (ref == index.unique_blocks.size()) {
      index.unique_blocks.emplace_back(block.begin(), block.end());
      seen.emplace(h, ref);
    }
    index.refs.push_back(ref);
  }
  const auto tail = values.subspan(n_full * block_size);
  index.tail.assign(tail.begin(), tail.end());
  return index;
}

inline std::vector<std::uint32_t> dedup_decode(const DedupIndex& index) {
  for (auto r : index.refs)
    if (r >= index.unique_blocks.size())
      fail(ErrorCode::dangling_ref, "ref " + std::to_string(r) + " but only " +
                                        std::to_string(index.unique_blocks.size()) + " unique blocks");
  for (const auto& u : index.unique_blocks)
    if (u.size() != index.block_size) fail(ErrorCode::malformed_input, "unique block of wrong size");
  std::vector<std::uint32_t> out;
  out.reserve(index.reconstructed_size());
  for (auto r : index.refs) out.insert(out.end(), index.unique_blocks[r].begin(), index.unique_blocks[r].end());
  out.insert(out.end(), index.tail.begin(), index.tail.end());
  return out;
}

// Byte form of a DedupIndex, all fields vbyte coded:
//   block_size, unique_count, ref_count, tail_len, refs..., unique elements..., tail...
inline void dedup_serialize(const DedupIndex& index, std::vector<std::uint8_t>& out) {
  vbyte_append(out, static_cast<std::uint32_t>(index.block_size));
  vbyte_append(out, static_cast<std::uint32_t>(index.unique_blocks.size()));
  vbyte_append(out, static_cast<std::uint32_t>(index.refs.size()));
  vbyte_append(out, static_cast<std::uint32_t>(index.tail.size()));
  vbyte_append(out, index.refs);
  for (const auto& u : index.unique_blocks) vbyte_append(out, u);
  vbyte_append(out, index.tail);
}

inline DedupIndex dedup_deserialize(std::span<const std::uint8_t> bytes) {
  std::size_t pos = 0;
  DedupIndex index;
  index.block_size = vbyte_read(bytes, pos);
  const std::size_t n_unique = vbyte_read(bytes, pos);
  const std::size_t n_refs = vbyte_read(bytes, pos);
  const std::size_t n_tail = vbyte_read(bytes, pos);
  if (index.block_size == 0) fail(ErrorCode::malformed_input, "dedup block_size of zero");
  // Each remaining value needs a byte; reject counts the buffer cannot hold.
  const std::size_t remaining = bytes.size() - pos;
  if (n_refs > remaining || n_tail > remaining || n_unique > remaining / index.block_size)
    fail(ErrorCode::malformed_input, "dedup counts exceed payload");
  index.refs.resize(n_refs);
  for (auto& r : index.refs) r = vbyte_read(bytes, pos);
  index.unique_blocks.assign(n_unique, std::vector<std::uint32_t>(index.block_size));
  for (auto& u : index.unique_blocks)
    for (auto& v : u) v = vbyte_read(bytes, pos);
  index.tail.resize(n_tail);
  for (auto& v : index.tail) v = vbyte_read(bytes, pos);
  if (pos != bytes.size()) fail(ErrorCode::malformed_input, "trailing bytes after dedup block");
  return index;
}

}  // namespace ppim::compress
