#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ppim/compress/chunk.hpp"
#include "ppim/error.hpp"
#include "ppim/orchestrate/pipeline.hpp"
#include "ppim/protocols/rng.hpp"

namespace ppim::apps {

inline constexpr std::string_view kCsvHeader = "experiment,size,strategy,phase,bytes,duration_s,value";

struct BenchRow {
  std::string experiment;
  std::uint64_t size = 0;
  std::string strategy;
  std::string phase;
  std::uint64_t bytes = 0;
  double duration = 0.0;
  double value = 0.0;
};

struct CompressionStat {
  std::uint64_t size = 0;
  double container_ratio = 0.0;
  double payload_ratio = 0.0;
  bool roundtrip_verified = false;
};

struct BenchReport {
  std::vector<BenchRow> rows;
  std::vector<CompressionStat> compression;  // bench_compression only

  void write_csv(std::ostream& os) const {
    os << kCsvHeader << '\n';
    for (const auto& r : rows) {
      char dur[32], val[32];
      std::snprintf(dur, sizeof dur, "%.17g", r.duration);
      std::snprintf(val, sizeof val, "%.17g", r.value);
      os << r.experiment << ',' << r.size << ',' << r.strategy << ',' << r.phase << ',' << r.bytes << ',' << dur << ','
         << val << '\n';
    }
  }
};

/// Writes through a temporary sibling file and renames it into place.
inline void write_file_atomically(const std::string& path, const std::string& contents) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::io_error, "cannot write '" + tmp + "'");
    out << contents;
    if (!out.flush()) fail(ErrorCode::io_error, "short write to '" + tmp + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) fail(ErrorCode::io_error, "cannot rename into '" + path + "': " + ec.message());
}

/// Uniform values in [0, 2^bits).
inline std::vector<std::uint32_t> random_values(std::size_t n, unsigned bits, protocols::Rng& rng) {
  std::vector<std::uint32_t> v(n);
  const std::uint64_t bound = 1ull << bits;
  for (auto& x : v) x = static_cast<std::uint32_t>(rng.uniform(bound));
  return v;
}

inline std::vector<std::uint64_t> default_sizes() {
  std::vector<std::uint64_t> s;
  for (unsigned k = 16; k <= 24; ++k) s.push_back(1ull << k);
  return s;
}

/// Vector-addition data-movement breakdown, uncompressed, plus the CPU-only
/// baseline. Pipeline phase fractions of each size sum to one.
inline BenchReport bench_vector_add(std::span<const std::uint64_t> sizes, orchestrate::OrchestrationConfig cfg,
                                    const pim::CostModel& cost, std::uint64_t seed = 1, pim::DpuSpec spec = {}) {
  if (sizes.empty()) fail(ErrorCode::invalid_argument, "no sizes given");
  cfg.inbound_codec = orchestrate::CodecChoice::none;
  cfg.outbound_codec = orchestrate::CodecChoice::none;
  auto system = pim::create_system(cfg.n_dpus, spec, cost);
  protocols::Rng rng(seed);
  BenchReport report;
  for (auto size : sizes) {
    const auto a = random_values(size, 32, rng);
    const auto b = random_values(size, 32, rng);
    const std::span<const std::uint32_t> inputs[] = {a, b};
    const auto job = orchestrate::run_pipeline(system, cfg, "vec_add", {}, inputs);
    const auto fractions = pim::phase_breakdown(job.timeline);
    const auto totals = job.timeline.phase_totals();
    for (auto phase : pim::kAllPhases) {
      const auto it = fractions.find(phase);
      if (it == fractions.end()) continue;
      report.rows.push_back({"vecadd", size, "none", std::string(pim::to_string(phase)), job.timeline.phase_bytes(phase),
                             totals.at(phase), it->second});
    }
    const auto cpu = orchestrate::run_cpu_baseline("vec_add", {}, inputs, cost);
    report.rows.push_back({"vecadd_cpu", size, "cpu", "host_compute", 8 * size, cpu.timeline.total(), 1.0});
  }
  return report;
}

/// Full-container compression ratio of uniform values in [0, 2^bits), after
/// verifying a parallel decode reproduces the input.
inline BenchReport bench_compression(std::span<const std::uint64_t> sizes, unsigned bits, std::size_t blocks,
                                     std::uint64_t seed, orchestrate::CodecChoice codec = orchestrate::CodecChoice::vbyte,
                                     const pim::CostModel& cost = {}) {
  if (sizes.empty()) fail(ErrorCode::invalid_argument, "no sizes given");
  if (bits < 1 || bits > 32) fail(ErrorCode::invalid_argument, "value range bits must be in [1, 32]");
  if (codec == orchestrate::CodecChoice::none) fail(ErrorCode::invalid_argument, "bench_compression needs a codec");
  const auto container = orchestrate::container_codec(codec);
  const orchestrate::CodecCosts costs;
  protocols::Rng rng(seed);
  BenchReport report;
  for (auto size : sizes) {
    if (size == 0) fail(ErrorCode::invalid_argument, "sizes must be positive");
    const auto values = random_values(size, bits, rng);
    const auto chunk = compress::encode_chunk(values, blocks, container);
    const auto bytes = chunk.serialize();
    const auto decoded = compress::decode_chunk_parallel(compress::CompressedChunk::parse(bytes), 8);
    const bool verified = decoded == values;
    if (!verified) fail(ErrorCode::internal, "compression roundtrip failed at size " + std::to_string(size));
    CompressionStat stat{size, compress::compression_ratio(4 * size, bytes.size()),
                         chunk.payload.empty() ? 0.0 : compress::compression_ratio(4 * size, chunk.payload.size()),
                         verified};
    report.compression.push_back(stat);
    report.rows.push_back({"compress_k" + std::to_string(bits), size, std::string(orchestrate::to_string(codec)),
                           "roundtrip_verified", bytes.size(),
                           static_cast<double>(size) * cost.cpu_op_time * costs.encode(codec), stat.container_ratio});
  }
  return report;
}

/// Total modeled time of each strategy on vector addition of uniform
/// values in [0, 2^bits). `value` is the speedup over the uncompressed run.
inline BenchReport bench_strategies(std::span<const std::uint64_t> sizes, unsigned bits,
                                    const orchestrate::OrchestrationConfig& cfg, const pim::CostModel& cost,
                                    std::uint64_t seed, std::string* winners = nullptr, pim::DpuSpec spec = {}) {
  if (sizes.empty()) fail(ErrorCode::invalid_argument, "no sizes given");
  if (bits < 1 || bits > 32) fail(ErrorCode::invalid_argument, "value range bits must be in [1, 32]");
  auto system = pim::create_system(cfg.n_dpus, spec, cost);
  protocols::Rng rng(seed);
  BenchReport report;
  for (auto size : sizes) {
    const auto a = random_values(size, bits, rng);
    const auto b = random_values(size, bits, rng);
    const std::span<const std::uint32_t> inputs[] = {a, b};
    const auto cmp = orchestrate::compare_strategies(system, cfg, "vec_add", {}, inputs);
    const double raw = cmp.get(orchestrate::CodecChoice::none).total;
    for (const auto& s : cmp.strategies)
      report.rows.push_back({"strategies", size, std::string(orchestrate::to_string(s.codec)), "total",
                             s.job.bytes.inbound_compressed + s.job.bytes.outbound_compressed, s.total, raw / s.total});
    report.rows.push_back({"strategies", size, "cpu", "total", 8 * size, cmp.cpu_total, raw / cmp.cpu_total});
    if (winners) *winners += std::to_string(size) + ":" + cmp.winner + " ";
  }
  return report;
}

}  // namespace ppim::apps
