#pragma once

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <exception>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "ppim/compress/dedup.hpp"
#include "ppim/compress/vbyte.hpp"
#include "ppim/error.hpp"

namespace ppim::compress {

enum class Codec : std::uint8_t { vbyte = 0, dedup_vbyte = 1 };

struct BlockEntry {
  std::uint32_t offset = 0;    // relative to start of the payload section
  std::uint32_t length = 0;    // payload bytes
  std::uint32_t elements = 0;
  bool operator==(const BlockEntry&) const = default;
};

/// Self-describing container of independently decodable blocks.
///
/// Layout, little-endian:
///   "PPC1" | element_count u64 | block_count u32 | codec u8
///   block_count x (offset u32 | length u32 | elements u32)
///   payload
struct CompressedChunk {
  static constexpr std::uint8_t kMagic[4] = {'P', 'P', 'C', '1'};
  static constexpr std::size_t kHeaderBytes = 17;
  static constexpr std::size_t kEntryBytes = 12;

  std::uint64_t element_count = 0;
  Codec codec = Codec::vbyte;
  std::vector<BlockEntry> blocks;
  std::vector<std::uint8_t> payload;

  std::size_t byte_size() const noexcept { return kHeaderBytes + kEntryBytes * blocks.size() + payload.size(); }

  std::span<const std::uint8_t> block_payload(std::size_t i) const {
    const auto& b = blocks.at(i);
    return std::span<const std::uint8_t>(payload).subspan(b.offset, b.length);
  }

  std::vector<std::uint8_t> serialize() const {
    std::vector<std::uint8_t> out;
    out.reserve(byte_size());
    for (auto b : kMagic) out.push_back(b);
    put(out, element_count, 8);
    put(out, blocks.size(), 4);
    out.push_back(static_cast<std::uint8_t>(codec));
    for (const auto& b : blocks) {
      put(out, b.offset, 4);
      put(out, b.length, 4);
      put(out, b.elements, 4);
    }
    out.insert(out.end(), payload.begin(), payload.end());
    return out;
  }

  /// Validates structure (magic, codec, table/payload agreement); block
  /// contents are checked when decoded.
  static CompressedChunk parse(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < kHeaderBytes) fail(ErrorCode::malformed_chunk, "shorter than header");
    if (!std::equal(std::begin(kMagic), std::end(kMagic), bytes.begin())) fail(ErrorCode::malformed_chunk, "bad magic");
    CompressedChunk c;
    c.element_count = get(bytes, 4, 8);
    const std::uint64_t n_blocks = get(bytes, 12, 4);
    const std::uint8_t codec = bytes[16];
    if (codec > 1) fail(ErrorCode::malformed_chunk, "unknown codec id " + std::to_string(codec));
    c.codec = static_cast<Codec>(codec);
    if (n_blocks > (bytes.size() - kHeaderBytes) / kEntryBytes) fail(ErrorCode::malformed_chunk, "block table truncated");
    const std::size_t payload_start = kHeaderBytes + kEntryBytes * n_blocks;
    c.blocks.resize(n_blocks);
    std::uint64_t expect_offset = 0;
    std::uint64_t elements = 0;
    for (std::size_t i = 0; i < n_blocks; ++i) {
      const std::size_t at = kHeaderBytes + kEntryBytes * i;
      auto& b = c.blocks[i];
      b.offset = static_cast<std::uint32_t>(get(bytes, at, 4));
      b.length = static_cast<std::uint32_t>(get(bytes, at + 4, 4));
      b.elements = static_cast<std::uint32_t>(get(bytes, at + 8, 4));
      if (b.offset != expect_offset) fail(ErrorCode::malformed_chunk, "block " + std::to_string(i) + " not contiguous");
      expect_offset += b.length;
      elements += b.elements;
    }
    if (payload_start + expect_offset != bytes.size())
      fail(ErrorCode::malformed_chunk, "payload size disagrees with block table");
    if (elements != c.element_count) fail(ErrorCode::malformed_chunk, "block element counts disagree with header");
    c.payload.assign(bytes.begin() + static_cast<std::ptrdiff_t>(payload_start), bytes.end());
    return c;
  }

  bool operator==(const CompressedChunk&) const = default;

 private:
  static void put(std::vector<std::uint8_t>& out, std::uint64_t v, int width) {
    for (int i = 0; i < width; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  static std::uint64_t get(std::span<const std::uint8_t> in, std::size_t at, int width) {
    std::uint64_t v = 0;
    for (int i = 0; i < width; ++i) v |= static_cast<std::uint64_t>(in[at + i]) << (8 * i);
    return v;
  }
};

inline constexpr std::size_t kDefaultDedupUnit = 64;

/// Element count of block `b` when `n` elements are split into `k` blocks.
constexpr std::size_t block_elements(std::size_t n, std::size_t k, std::size_t b) noexcept {
  return n / k + (b < n % k ? 1 : 0);
}

/// Encodes one block on its own. The result depends only on `values`.
inline void encode_block(std::span<const std::uint32_t> values, Codec codec, std::size_t dedup_unit,
                         std::vector<std::uint8_t>& out) {
  if (codec == Codec::vbyte)
    vbyte_append(out, values);
  else
    dedup_serialize(dedup_encode(values, dedup_unit), out);
}

/// Decodes one block given only its own bytes.
inline void decode_block(std::span<const std::uint8_t> bytes, Codec codec, std::span<std::uint32_t> out) {
  try {
    if (codec == Codec::vbyte) {
      vbyte_decode_into(bytes, out);
    } else {
      const auto values = dedup_decode(dedup_deserialize(bytes));
      if (values.size() != out.size()) fail(ErrorCode::malformed_input, "dedup block has wrong element count");
      std::copy(values.begin(), values.end(), out.begin());
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::malformed_chunk) throw;
    fail(ErrorCode::malformed_chunk, std::string("block payload: ") + e.what());
  }
}

inline CompressedChunk encode_chunk(std::span<const std::uint32_t> values, std::size_t n_blocks,
                                    Codec codec = Codec::vbyte, std::size_t dedup_unit = kDefaultDedupUnit) {
  if (n_blocks == 0) fail(ErrorCode::invalid_argument, "n_blocks must be at least 1");
  if (n_blocks > 0xFFFFFFFFull) fail(ErrorCode::invalid_argument, "too many blocks");
  if (dedup_unit == 0) fail(ErrorCode::invalid_argument, "dedup unit must be at least 1");
  CompressedChunk c;
  c.element_count = values.size();
  c.codec = codec;
  c.blocks.resize(n_blocks);
  std::size_t begin = 0;
  for (std::size_t b = 0; b < n_blocks; ++b) {
    const std::size_t n = block_elements(values.size(), n_blocks, b);
    if (n > 0xFFFFFFFFull) fail(ErrorCode::invalid_argument, "block exceeds 2^32 elements");
    const std::size_t before = c.payload.size();
    encode_block(values.subspan(begin, n), codec, dedup_unit, c.payload);
    if (c.payload.size() > 0xFFFFFFFFull) fail(ErrorCode::invalid_argument, "payload exceeds 4 GiB");
    c.blocks[b] = {static_cast<std::uint32_t>(before), static_cast<std::uint32_t>(c.payload.size() - before),
                   static_cast<std::uint32_t>(n)};
    begin += n;
  }
  return c;
}

inline std::vector<std::uint32_t> decode_chunk(const CompressedChunk& chunk) {
  std::vector<std::uint32_t> out(chunk.element_count);
  std::size_t at = 0;
  for (std::size_t b = 0; b < chunk.blocks.size(); ++b) {
    const std::size_t n = chunk.blocks[b].elements;
    decode_block(chunk.block_payload(b), chunk.codec, std::span(out).subspan(at, n));
    at += n;
  }
  return out;
}

enum class Execution { threads, simulated };

/// Decodes with `n_workers` workers; worker w takes blocks w, w + n_workers, ...
/// Output is independent of the worker count and execution mode.
inline std::vector<std::uint32_t> decode_chunk_parallel(const CompressedChunk& chunk, unsigned n_workers,
                                                        Execution exec = Execution::threads) {
  if (n_workers == 0) fail(ErrorCode::invalid_argument, "n_workers must be at least 1");
  std::uint64_t total = 0;
  for (const auto& b : chunk.blocks) total += b.elements;
  if (total != chunk.element_count) fail(ErrorCode::malformed_chunk, "block element counts disagree with header");
  std::uint64_t expect_offset = 0;
  for (const auto& b : chunk.blocks) {
    if (b.offset != expect_offset) fail(ErrorCode::malformed_chunk, "blocks not contiguous");
    expect_offset += b.length;
  }
  if (expect_offset != chunk.payload.size()) fail(ErrorCode::malformed_chunk, "payload size disagrees with block table");

  std::vector<std::size_t> starts(chunk.blocks.size());
  for (std::size_t b = 1; b < chunk.blocks.size(); ++b) starts[b] = starts[b - 1] + chunk.blocks[b - 1].elements;
  std::vector<std::uint32_t> out(chunk.element_count);
  auto work = [&](unsigned w) {
    for (std::size_t b = w; b < chunk.blocks.size(); b += n_workers)
      decode_block(chunk.block_payload(b), chunk.codec, std::span(out).subspan(starts[b], chunk.blocks[b].elements));
  };

  if (exec == Execution::simulated || n_workers == 1) {
    for (unsigned w = 0; w < n_workers; ++w) work(w);
    return out;
  }
  std::vector<std::exception_ptr> errors(n_workers);
  {
    std::vector<std::jthread> pool;
    pool.reserve(n_workers);
    for (unsigned w = 0; w < n_workers; ++w)
      pool.emplace_back([&, w] {
        try {
          work(w);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

/// Elements handled by the busiest worker under round-robin block assignment.
inline std::uint64_t round_robin_critical(std::span<const std::uint64_t> block_sizes, unsigned n_workers) {
  std::vector<std::uint64_t> load(n_workers, 0);
  for (std::size_t b = 0; b < block_sizes.size(); ++b) load[b % n_workers] += block_sizes[b];
  return load.empty() ? 0 : *std::max_element(load.begin(), load.end());
}

}  // namespace ppim::compress
