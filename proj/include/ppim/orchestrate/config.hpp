#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "ppim/compress/chunk.hpp"
#include "ppim/error.hpp"
#include "ppim/pim/system.hpp"

namespace ppim::orchestrate {

enum class CodecChoice { none, vbyte, dedup_vbyte };

constexpr std::string_view to_string(CodecChoice c) {
  switch (c) {
    case CodecChoice::none: return "none";
    case CodecChoice::vbyte: return "vbyte";
    case CodecChoice::dedup_vbyte: return "dedup";
  }
  return "?";
}

inline CodecChoice parse_codec(std::string_view s) {
  if (s == "none") return CodecChoice::none;
  if (s == "vbyte") return CodecChoice::vbyte;
  if (s == "dedup" || s == "dedup+vbyte") return CodecChoice::dedup_vbyte;
  fail(ErrorCode::invalid_argument, "unknown codec '" + std::string(s) + "'");
}

inline compress::Codec container_codec(CodecChoice c) {
  return c == CodecChoice::dedup_vbyte ? compress::Codec::dedup_vbyte : compress::Codec::vbyte;
}

/// Per-element cost multipliers for the codecs, applied to cpu_op_time on
/// the host and dpu_op_time on a DPU.
struct CodecCosts {
  double vbyte_encode = 2.0;
  double vbyte_decode = 2.0;
  double dedup_encode = 4.0;
  double dedup_decode = 2.0;

  double encode(CodecChoice c) const {
    return c == CodecChoice::none ? 0.0 : c == CodecChoice::vbyte ? vbyte_encode : dedup_encode;
  }
  double decode(CodecChoice c) const {
    return c == CodecChoice::none ? 0.0 : c == CodecChoice::vbyte ? vbyte_decode : dedup_decode;
  }
};

struct OrchestrationConfig {
  std::size_t n_dpus = 1;           // N
  std::size_t chunk_elements = 0;   // N_D per input; 0 derives ceil(|data| / N)
  unsigned tasklets_per_dpu = 16;   // T
  CodecChoice inbound_codec = CodecChoice::none;
  std::optional<CodecChoice> outbound_codec;  // defaults to inbound_codec
  std::size_t blocks_per_chunk = 16;
  std::size_t dedup_unit = compress::kDefaultDedupUnit;
  CodecCosts codec_costs{};

  CodecChoice outbound() const { return outbound_codec.value_or(inbound_codec); }

  void validate(const pim::PimSystem& system) const {
    if (n_dpus < 1) fail(ErrorCode::config_invalid, "N must be at least 1");
    if (n_dpus > system.size())
      fail(ErrorCode::config_invalid, "N = " + std::to_string(n_dpus) + " but the system has " +
                                          std::to_string(system.size()) + " DPUs");
    if (tasklets_per_dpu < 1 || tasklets_per_dpu > system.spec().max_tasklets)
      fail(ErrorCode::config_invalid, "T = " + std::to_string(tasklets_per_dpu) + " outside [1, " +
                                          std::to_string(system.spec().max_tasklets) + "]");
    if (blocks_per_chunk < 1) fail(ErrorCode::config_invalid, "blocks_per_chunk must be at least 1");
    if (dedup_unit < 1) fail(ErrorCode::config_invalid, "dedup_unit must be at least 1");
  }
};

}  // namespace ppim::orchestrate
