#pragma once

#include <cstdint>
#include <exception>
#include <span>
#include <string>
#include <vector>

#include "ppim/compress/chunk.hpp"
#include "ppim/error.hpp"
#include "ppim/kernels/registry.hpp"
#include "ppim/orchestrate/config.hpp"
#include "ppim/orchestrate/split.hpp"
#include "ppim/pim/bytes.hpp"
#include "ppim/pim/system.hpp"
#include "ppim/pim/timeline.hpp"

namespace ppim::orchestrate {

using Inputs = std::span<const std::span<const std::uint32_t>>;

struct ByteCounts {
  std::uint64_t inbound_raw = 0;
  std::uint64_t inbound_compressed = 0;
  std::uint64_t outbound_raw = 0;
  std::uint64_t outbound_compressed = 0;
};

struct JobResult {
  std::vector<std::uint32_t> output;
  pim::Timeline timeline;
  ByteCounts bytes;
};

struct CpuResult {
  std::vector<std::uint32_t> output;
  pim::Timeline timeline;
};

namespace detail {

inline std::size_t common_length(Inputs inputs, const kernels::KernelSpec& spec, const kernels::KernelParams& params) {
  if (inputs.size() != spec.arity)
    fail(ErrorCode::config_invalid, spec.id + " takes " + std::to_string(spec.arity) + " inputs, got " +
                                        std::to_string(inputs.size()));
  const std::size_t len = inputs[0].size();
  for (const auto& in : inputs)
    if (in.size() != len) fail(ErrorCode::length_mismatch, spec.id + " inputs have different lengths");
  if (len % spec.granule(params) != 0)
    fail(ErrorCode::wrong_length, spec.id + " input length must be a multiple of " + std::to_string(spec.granule(params)));
  return len;
}

inline std::vector<std::uint8_t> host_encode(std::span<const std::uint32_t> values, CodecChoice codec,
                                             const OrchestrationConfig& cfg) {
  if (codec == CodecChoice::none) return pim::to_le32(values);
  return compress::encode_chunk(values, cfg.blocks_per_chunk, container_codec(codec), cfg.dedup_unit).serialize();
}

inline std::vector<std::uint32_t> host_decode(std::span<const std::uint8_t> bytes, CodecChoice codec,
                                              std::size_t expected) {
  auto values = codec == CodecChoice::none ? pim::from_le32(bytes)
                                           : compress::decode_chunk(compress::CompressedChunk::parse(bytes));
  if (values.size() != expected)
    fail(ErrorCode::internal, "decoded " + std::to_string(values.size()) + " elements, expected " + std::to_string(expected));
  return values;
}

inline std::vector<std::uint64_t> block_sizes(const compress::CompressedChunk& c) {
  std::vector<std::uint64_t> out;
  out.reserve(c.blocks.size());
  for (const auto& b : c.blocks) out.push_back(b.elements);
  return out;
}

/// DPU-side container decode; tasklet w decodes blocks w, w+T, ...
inline pim::DpuKernel decompress_kernel(CodecChoice codec, const CodecCosts& costs) {
  pim::DpuKernel k;
  k.name = "decompress";
  k.cost_factor = costs.decode(codec);
  k.wram_per_tasklet_bytes = 2 * kernels::kWramTileBytes;
  k.body = [](std::span<const pim::ByteView> in, unsigned t) {
    const auto chunk = compress::CompressedChunk::parse(in[0]);
    const auto values = compress::decode_chunk_parallel(chunk, t, compress::Execution::simulated);
    const auto sizes = block_sizes(chunk);
    return pim::KernelWork{pim::to_le32(values), {compress::round_robin_critical(sizes, t)}};
  };
  return k;
}

inline pim::DpuKernel compress_kernel(CodecChoice codec, const OrchestrationConfig& cfg) {
  pim::DpuKernel k;
  k.name = "compress";
  k.cost_factor = cfg.codec_costs.encode(codec);
  k.wram_per_tasklet_bytes = 2 * kernels::kWramTileBytes;
  const auto container = container_codec(codec);
  const std::size_t blocks = cfg.blocks_per_chunk;
  const std::size_t unit = cfg.dedup_unit;
  k.body = [container, blocks, unit](std::span<const pim::ByteView> in, unsigned t) {
    const auto values = pim::from_le32(in[0]);
    const auto chunk = compress::encode_chunk(values, blocks, container, unit);
    const auto sizes = block_sizes(chunk);
    return pim::KernelWork{chunk.serialize(), {compress::round_robin_critical(sizes, t)}};
  };
  return k;
}

inline pim::PhaseRecord passthrough(int dpu, const std::string& step, std::uint64_t bytes) {
  return pim::PhaseRecord{pim::Phase::dpu_compute, dpu, bytes, 0, 0.0, step, 0};
}

}  // namespace detail

/// Wraps a registry kernel for execution on a DPU. The MRAM input is the
/// concatenation of `arity` slices of `chunk_elements` each.
inline pim::DpuKernel make_dpu_kernel(const kernels::KernelSpec& spec, const kernels::KernelParams& params,
                                     std::size_t chunk_elements) {
  pim::DpuKernel k;
  k.name = spec.id;
  k.cost_factor = 1.0;
  k.wram_shared_bytes = spec.wram_shared(params);
  k.wram_per_tasklet_bytes = spec.wram_per_tasklet;
  k.body = [&spec, params, chunk_elements](std::span<const pim::ByteView> in, unsigned t) {
    const auto values = pim::from_le32(in[0]);
    if (values.size() != spec.arity * chunk_elements) fail(ErrorCode::missing_input, spec.id + ": input size mismatch");
    std::vector<std::span<const std::uint32_t>> slices;
    for (std::size_t j = 0; j < spec.arity; ++j)
      slices.push_back(std::span(values).subspan(j * chunk_elements, chunk_elements));
    auto out = spec.run(slices, params, t);
    return pim::KernelWork{pim::to_le32(out.values), std::move(out.stages)};
  };
  return k;
}

/// Runs the host -> DPU -> host pipeline: split, compress, copy in, decompress
/// on DPU, process, compress results, copy out, decompress, aggregate.
///
/// Per-DPU steps in one loop iteration run concurrently across DPUs and are
/// recorded as parallel groups; host-side codec work is single-threaded and
/// recorded one chunk at a time.
inline JobResult run_pipeline(pim::PimSystem& system, const OrchestrationConfig& cfg, const std::string& kernel_id,
                              const kernels::KernelParams& params, Inputs inputs) {
  cfg.validate(system);
  const auto& spec = kernels::find_kernel(kernel_id);
  spec.validate(params);
  const std::size_t len = detail::common_length(inputs, spec, params);
  const std::size_t n = cfg.n_dpus;
  const unsigned t = cfg.tasklets_per_dpu;
  const auto& cost = system.cost();
  const CodecChoice in_codec = cfg.inbound_codec;
  const CodecChoice out_codec = cfg.outbound();

  std::vector<std::vector<Chunk>> split_inputs;
  for (const auto& in : inputs) split_inputs.push_back(split(in, n, spec.granule(params), cfg.chunk_elements));
  const std::size_t chunk_elements = split_inputs[0][0].values.size();
  const bool reduce = spec.aggregation == kernels::Aggregation::sum_mod;
  const std::size_t out_elements = reduce ? 1 : chunk_elements;

  // A failure part-way leaves partial allocations behind; drop them.
  struct ResetOnThrow {
    pim::PimSystem& system;
    std::size_t n;
    int pending = std::uncaught_exceptions();
    ~ResetOnThrow() {
      if (std::uncaught_exceptions() > pending)
        for (std::size_t i = 0; i < n; ++i) system.reset(i);
    }
  } guard{system, n};

  JobResult job;
  auto& tl = job.timeline;
  std::vector<std::vector<std::uint8_t>> packed(n);

  // Compress(chunk-i) on the host.
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::uint32_t> raw;
    raw.reserve(spec.arity * chunk_elements);
    for (const auto& chunks : split_inputs) raw.insert(raw.end(), chunks[i].values.begin(), chunks[i].values.end());
    packed[i] = detail::host_encode(raw, in_codec, cfg);
    job.bytes.inbound_raw += 4 * raw.size();
    tl.add_sequential({pim::Phase::host_compress, static_cast<int>(i), packed[i].size(), raw.size(),
                       static_cast<double>(raw.size()) * cost.cpu_op_time * cfg.codec_costs.encode(in_codec),
                       "compress", 0});
  }

  std::vector<pim::MramRegion> regions(n);
  std::vector<pim::PhaseRecord> group(n);
  auto flush = [&] { tl.add_parallel(group); };

  // Copy compressed chunk-i to DPU_i.
  for (std::size_t i = 0; i < n; ++i) {
    auto copy = system.copy_to_dpu(i, packed[i]);
    regions[i] = copy.region;
    group[i] = copy.record;
    job.bytes.inbound_compressed += packed[i].size();
  }
  flush();

  // Decompress(chunk-i) with T tasklets.
  const auto decompress = detail::decompress_kernel(in_codec, cfg.codec_costs);
  for (std::size_t i = 0; i < n; ++i) {
    if (in_codec == CodecChoice::none) {
      group[i] = detail::passthrough(static_cast<int>(i), "decompress", regions[i].length);
      continue;
    }
    auto launch = system.launch_kernel(i, decompress, std::span(&regions[i], 1), t);
    system.free(i, regions[i]);
    regions[i] = launch.output;
    group[i] = launch.record;
  }
  flush();

  // Process chunk-i with T tasklets.
  const auto process = make_dpu_kernel(spec, params, chunk_elements);
  for (std::size_t i = 0; i < n; ++i) {
    auto launch = system.launch_kernel(i, process, std::span(&regions[i], 1), t);
    system.free(i, regions[i]);
    regions[i] = launch.output;
    group[i] = launch.record;
    group[i].step = "process";
  }
  flush();

  // Compress results of chunk-i on the DPU.
  const auto compress_results = detail::compress_kernel(out_codec, cfg);
  for (std::size_t i = 0; i < n; ++i) {
    job.bytes.outbound_raw += regions[i].length;
    if (out_codec == CodecChoice::none) {
      group[i] = detail::passthrough(static_cast<int>(i), "compress", regions[i].length);
      continue;
    }
    auto launch = system.launch_kernel(i, compress_results, std::span(&regions[i], 1), t);
    system.free(i, regions[i]);
    regions[i] = launch.output;
    group[i] = launch.record;
  }
  flush();

  // Copy compressed results from DPU_i to the host.
  std::vector<std::vector<std::uint8_t>> returned(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto read = system.copy_from_dpu(i, regions[i]);
    returned[i] = std::move(read.data);
    group[i] = read.record;
    job.bytes.outbound_compressed += returned[i].size();
    system.free(i, regions[i]);
  }
  flush();

  // Decompress results of chunk-i on the host, then aggregate.
  std::vector<std::vector<std::uint32_t>> results(n);
  for (std::size_t i = 0; i < n; ++i) {
    results[i] = detail::host_decode(returned[i], out_codec, out_elements);
    tl.add_sequential({pim::Phase::host_decompress, static_cast<int>(i), 4 * results[i].size(), results[i].size(),
                       static_cast<double>(results[i].size()) * cost.cpu_op_time * cfg.codec_costs.decode(out_codec),
                       "decompress", 0});
  }

  std::uint64_t agg_work = 0;
  if (reduce) {
    const kernels::ModulusContext m(params.modulus);
    std::uint64_t acc = 0;
    for (const auto& r : results) acc = m.add(acc, r[0]);
    job.output = {static_cast<std::uint32_t>(acc)};
    agg_work = n;
  } else {
    job.output.reserve(len);
    for (std::size_t i = 0; i < n; ++i)
      job.output.insert(job.output.end(), results[i].begin(),
                        results[i].begin() + static_cast<std::ptrdiff_t>(split_inputs[0][i].logical));
  }
  tl.add_sequential({pim::Phase::host_compute, pim::kHost, 4 * job.output.size(), agg_work,
                     static_cast<double>(agg_work) * cost.cpu_op_time, "aggregate", 0});
  return job;
}

/// Reference run of the same kernel entirely on the host.
inline CpuResult run_cpu_baseline(const std::string& kernel_id, const kernels::KernelParams& params, Inputs inputs,
                                  const pim::CostModel& cost = {}) {
  const auto& spec = kernels::find_kernel(kernel_id);
  spec.validate(params);
  detail::common_length(inputs, spec, params);
  auto out = spec.run(inputs, params, 1);
  CpuResult result;
  result.output = std::move(out.values);
  result.timeline.add_sequential({pim::Phase::host_compute, pim::kHost, 4 * result.output.size(), out.work,
                                  static_cast<double>(out.work) * cost.cpu_op_time, "cpu", 0});
  return result;
}

struct StrategyResult {
  CodecChoice codec;
  JobResult job;
  double total = 0.0;
};

struct StrategyReport {
  std::vector<StrategyResult> strategies;
  CpuResult cpu;
  double cpu_total = 0.0;
  std::string winner;

  const StrategyResult& get(CodecChoice c) const {
    for (const auto& s : strategies)
      if (s.codec == c) return s;
    fail(ErrorCode::invalid_argument, "strategy not in report");
  }
};

/// Runs the pipeline with each codec (both directions) and the CPU baseline.
/// `cfg`'s codec fields are overridden per strategy.
inline StrategyReport compare_strategies(pim::PimSystem& system, OrchestrationConfig cfg, const std::string& kernel_id,
                                         const kernels::KernelParams& params, Inputs inputs) {
  StrategyReport report;
  report.cpu = run_cpu_baseline(kernel_id, params, inputs, system.cost());
  report.cpu_total = report.cpu.timeline.total();
  double best = report.cpu_total;
  report.winner = "cpu";
  for (CodecChoice c : {CodecChoice::none, CodecChoice::vbyte, CodecChoice::dedup_vbyte}) {
    cfg.inbound_codec = c;
    cfg.outbound_codec = c;
    auto job = run_pipeline(system, cfg, kernel_id, params, inputs);
    if (job.output != report.cpu.output)
      fail(ErrorCode::internal, std::string("strategy ") + std::string(to_string(c)) + " disagrees with the CPU baseline");
    const double total = job.timeline.total();
    if (total < best) {
      best = total;
      report.winner = std::string(to_string(c));
    }
    report.strategies.push_back({c, std::move(job), total});
  }
  return report;
}

}  // namespace ppim::orchestrate
