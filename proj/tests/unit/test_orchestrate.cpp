#include <gtest/gtest.h>

#include "ppim/kernels/poly.hpp"
#include "ppim/orchestrate/pipeline.hpp"
#include "ppim/protocols/rng.hpp"

using namespace ppim;
using namespace ppim::orchestrate;
using pim::Phase;

namespace {

template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::internal;
}

std::vector<std::uint32_t> random_vec(protocols::Rng& rng, std::size_t n, std::uint64_t bound) {
  std::vector<std::uint32_t> v(n);
  for (auto& x : v) x = static_cast<std::uint32_t>(rng.uniform(bound));
  return v;
}

OrchestrationConfig config(std::size_t n, unsigned t, CodecChoice codec) {
  OrchestrationConfig cfg;
  cfg.n_dpus = n;
  cfg.tasklets_per_dpu = t;
  cfg.inbound_codec = codec;
  return cfg;
}

}  // namespace

TEST(Split, Examples) {
  std::vector<std::uint32_t> v(10);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<std::uint32_t>(i + 1);
  const auto chunks = split(v, 4);
  ASSERT_EQ(chunks.size(), 4u);
  for (const auto& c : chunks) EXPECT_EQ(c.values.size(), 3u);
  EXPECT_EQ(chunks[3].logical, 1u);
  EXPECT_EQ(chunks[3].values, (std::vector<std::uint32_t>{10, 0, 0}));
  const auto empty = split(std::vector<std::uint32_t>{}, 3);
  for (const auto& c : empty) EXPECT_EQ(c.logical, 0u);
  const auto granular = split(v, 2, 4);
  EXPECT_EQ(granular[0].values.size(), 8u);
  EXPECT_EQ(granular[1].logical, 2u);
  EXPECT_EQ(code_of([&] { split(v, 2, 1, 4); }), ErrorCode::config_invalid);
  EXPECT_EQ(split(v, 2, 1, 6)[1].logical, 4u);
}

TEST(Pipeline, VecAddCompressed) {
  protocols::Rng rng(1);
  auto system = pim::create_system(8);
  const auto a = random_vec(rng, 1u << 16, 100), b = random_vec(rng, 1u << 16, 100);
  const std::span<const std::uint32_t> in[] = {a, b};
  const auto job = run_pipeline(system, config(8, 16, CodecChoice::vbyte), "vec_add", {}, in);
  EXPECT_EQ(job.output, kernels::vec_add(a, b));
  EXPECT_LT(job.bytes.inbound_compressed, job.bytes.inbound_raw);
  EXPECT_LT(job.bytes.outbound_compressed, job.bytes.outbound_raw);
  EXPECT_EQ(job.bytes.inbound_raw, 8u * a.size());
  EXPECT_EQ(job.bytes.outbound_raw, 4u * a.size());
  for (std::size_t i = 0; i < 8; ++i) EXPECT_EQ(system.dpu(i).used_bytes(), 0u);
}

TEST(Pipeline, Identity) {
  protocols::Rng rng(2);
  auto system = pim::create_system(4);
  const auto a = random_vec(rng, 1001, 1ull << 32);
  const std::span<const std::uint32_t> in[] = {a};
  for (auto codec : {CodecChoice::none, CodecChoice::vbyte, CodecChoice::dedup_vbyte})
    EXPECT_EQ(run_pipeline(system, config(3, 5, codec), "identity", {}, in).output, a);
}

TEST(Pipeline, EmptyInput) {
  auto system = pim::create_system(4);
  const std::vector<std::uint32_t> a;
  const std::span<const std::uint32_t> in[] = {a, a};
  EXPECT_TRUE(run_pipeline(system, config(4, 8, CodecChoice::vbyte), "vec_add", {}, in).output.empty());
  EXPECT_EQ(run_pipeline(system, config(4, 8, CodecChoice::none), "dot", {97, 0}, in).output,
            std::vector<std::uint32_t>{0});
}

TEST(Pipeline, OutputIndependentOfParameters) {
  protocols::Rng rng(3);
  auto system = pim::create_system(16);
  const auto a = random_vec(rng, 5000, 2147483647), b = random_vec(rng, 5000, 2147483647);
  const std::span<const std::uint32_t> in[] = {a, b};
  const kernels::KernelParams p{2147483647, 0};
  const auto ref = run_cpu_baseline("dot", p, in).output;
  for (std::size_t n : {1u, 5u, 16u})
    for (unsigned t : {1u, 11u, 24u})
      for (auto codec : {CodecChoice::none, CodecChoice::vbyte, CodecChoice::dedup_vbyte}) {
        auto cfg = config(n, t, codec);
        cfg.outbound_codec = CodecChoice::vbyte;
        cfg.blocks_per_chunk = 1 + rng.uniform(20);
        EXPECT_EQ(run_pipeline(system, cfg, "dot", p, in).output, ref);
      }
}

TEST(Pipeline, CpuBaseline) {
  const std::vector<std::uint32_t> a = {1, 2}, b = {3, 4};
  const std::span<const std::uint32_t> in[] = {a, b};
  EXPECT_EQ(run_cpu_baseline("vec_add", {}, in).output, (std::vector<std::uint32_t>{4, 6}));
  const std::vector<std::uint32_t> c = {1, 2, 3}, d = {4, 5, 6};
  const std::span<const std::uint32_t> in2[] = {c, d};
  EXPECT_EQ(run_cpu_baseline("dot", {97, 0}, in2).output, std::vector<std::uint32_t>{32});
  const std::vector<std::uint32_t> e;
  const std::span<const std::uint32_t> in3[] = {e, e};
  EXPECT_TRUE(run_cpu_baseline("vec_add", {}, in3).output.empty());
}

TEST(Pipeline, TimelineCompleteness) {
  protocols::Rng rng(4);
  auto system = pim::create_system(4);
  const auto a = random_vec(rng, 4000, 1000), b = random_vec(rng, 4000, 1000);
  const std::span<const std::uint32_t> in[] = {a, b};
  const auto job = run_pipeline(system, config(4, 16, CodecChoice::vbyte), "vec_add", {}, in);
  std::map<Phase, int> per_phase;
  std::map<std::string, int> steps;
  for (const auto& r : job.timeline.records()) {
    ++per_phase[r.phase];
    ++steps[r.step];
    EXPECT_GE(r.duration, 0.0);
  }
  EXPECT_EQ(per_phase[Phase::host_compress], 4);
  EXPECT_EQ(per_phase[Phase::host_to_dpu], 4);
  EXPECT_EQ(per_phase[Phase::dpu_compute], 12);
  EXPECT_EQ(per_phase[Phase::dpu_to_host], 4);
  EXPECT_EQ(per_phase[Phase::host_decompress], 4);
  EXPECT_EQ(per_phase[Phase::host_compute], 1);
  EXPECT_EQ(steps["decompress"], 8);
  EXPECT_EQ(steps["process"], 4);
  EXPECT_EQ(steps["compress"], 8);
  EXPECT_EQ(job.timeline.phase_bytes(Phase::host_to_dpu), job.bytes.inbound_compressed);
  EXPECT_EQ(job.timeline.phase_bytes(Phase::dpu_to_host), job.bytes.outbound_compressed);
  double sum = 0.0;
  for (const auto& [p, f] : pim::phase_breakdown(job.timeline)) sum += f;
  EXPECT_NEAR(sum, 1.0, 1e-12);
}

TEST(Pipeline, UncompressedByteAccounting) {
  auto system = pim::create_system(2);
  const std::vector<std::uint32_t> a(100, 7), b(100, 8);
  const std::span<const std::uint32_t> in[] = {a, b};
  const auto job = run_pipeline(system, config(2, 4, CodecChoice::none), "vec_add", {}, in);
  EXPECT_EQ(job.bytes.inbound_compressed, 800u);
  EXPECT_EQ(job.bytes.outbound_compressed, 400u);
  const auto& cost = system.cost();
  // Two DPUs in parallel, each with 50 elements per input.
  const double expect = cost.transfer_latency + 400.0 / cost.host_to_dpu_bw + 13 * cost.dpu_op_time +
                        cost.transfer_latency + 200.0 / cost.dpu_to_host_bw;
  EXPECT_NEAR(job.timeline.total(), expect, 1e-15);
}

TEST(Pipeline, PolyKernels) {
  protocols::Rng rng(5);
  auto system = pim::create_system(4);
  const auto ring = kernels::make_ring(256, 7681);
  const auto a = random_vec(rng, 4 * 256, 7681), b = random_vec(rng, 4 * 256, 7681);
  const std::span<const std::uint32_t> in[] = {a, b};
  const kernels::KernelParams p{7681, 256};
  const auto job = run_pipeline(system, config(3, 8, CodecChoice::vbyte), "poly_mul", p, in);
  for (std::size_t k = 0; k < 4; ++k) {
    const kernels::Polynomial pa(ring, {a.begin() + 256 * k, a.begin() + 256 * (k + 1)});
    const kernels::Polynomial pb(ring, {b.begin() + 256 * k, b.begin() + 256 * (k + 1)});
    const auto c = kernels::poly_mul_schoolbook(pa, pb);
    for (std::size_t i = 0; i < 256; ++i) ASSERT_EQ(job.output[256 * k + i], c[i]);
  }
  const std::span<const std::uint32_t> one[] = {a};
  const auto ntt = run_pipeline(system, config(2, 24, CodecChoice::none), "ntt", p, one);
  EXPECT_EQ(ntt.output, run_cpu_baseline("ntt", p, one).output);
}

TEST(Pipeline, Errors) {
  auto system = pim::create_system(2);
  const std::vector<std::uint32_t> a = {1, 2, 3}, b = {1, 2};
  const std::span<const std::uint32_t> mismatched[] = {a, b};
  const std::span<const std::uint32_t> single[] = {a};
  EXPECT_EQ(code_of([&] { run_pipeline(system, config(2, 4, CodecChoice::none), "vec_add", {}, mismatched); }),
            ErrorCode::length_mismatch);
  EXPECT_EQ(code_of([&] { run_pipeline(system, config(2, 4, CodecChoice::none), "vec_add", {}, single); }),
            ErrorCode::config_invalid);
  EXPECT_EQ(code_of([&] { run_pipeline(system, config(3, 4, CodecChoice::none), "identity", {}, single); }),
            ErrorCode::config_invalid);
  EXPECT_EQ(code_of([&] { run_pipeline(system, config(2, 25, CodecChoice::none), "identity", {}, single); }),
            ErrorCode::config_invalid);
  EXPECT_EQ(code_of([&] { run_pipeline(system, config(2, 4, CodecChoice::none), "fft", {}, single); }),
            ErrorCode::unknown_kernel);
  EXPECT_EQ(code_of([&] { run_pipeline(system, config(2, 4, CodecChoice::none), "ntt", {7681, 256}, single); }),
            ErrorCode::wrong_length);
  const std::vector<std::uint32_t> big = {7681, 0, 0};
  const std::span<const std::uint32_t> unreduced[] = {big, a};
  EXPECT_EQ(code_of([&] { run_pipeline(system, config(2, 4, CodecChoice::vbyte), "mod_add", {7681, 0}, unreduced); }),
            ErrorCode::input_out_of_range);
  // A failed run leaves no MRAM allocations behind.
  EXPECT_EQ(system.dpu(0).used_bytes(), 0u);
  EXPECT_EQ(system.dpu(1).used_bytes(), 0u);
}

TEST(Pipeline, CapacityExceeded) {
  auto system = pim::create_system(1, pim::DpuSpec{1024, 64 << 10, 24});
  const std::vector<std::uint32_t> a(300, 1);
  const std::span<const std::uint32_t> in[] = {a};
  EXPECT_EQ(code_of([&] { run_pipeline(system, config(1, 4, CodecChoice::none), "identity", {}, in); }),
            ErrorCode::capacity_exceeded);
  EXPECT_EQ(system.dpu(0).used_bytes(), 0u);
}

TEST(Pipeline, WramExceededForLargeRings) {
  auto system = pim::create_system(1, pim::DpuSpec{64 << 20, 4096, 24});
  std::vector<std::uint32_t> a(1024, 1);
  const std::span<const std::uint32_t> in[] = {a, a};
  EXPECT_EQ(code_of([&] {
              run_pipeline(system, config(1, 4, CodecChoice::none), "poly_mul", {132120577, 1024}, in);
            }),
            ErrorCode::wram_exceeded);
}

TEST(Strategies, Examples) {
  protocols::Rng rng(6);
  auto system = pim::create_system(16);
  const auto a = random_vec(rng, 1u << 16, 128), b = random_vec(rng, 1u << 16, 128);
  const std::span<const std::uint32_t> in[] = {a, b};
  const auto report = compare_strategies(system, config(16, 16, CodecChoice::none), "vec_add", {}, in);
  ASSERT_EQ(report.strategies.size(), 3u);
  EXPECT_EQ(report.cpu.output, kernels::vec_add(a, b));
  for (const auto& s : report.strategies) {
    EXPECT_EQ(s.job.output, report.cpu.output);
    EXPECT_DOUBLE_EQ(s.total, s.job.timeline.total());
  }
  EXPECT_LT(report.get(CodecChoice::vbyte).job.bytes.inbound_compressed,
            report.get(CodecChoice::none).job.bytes.inbound_compressed);
  double best = report.cpu_total;
  std::string winner = "cpu";
  for (const auto& s : report.strategies)
    if (s.total < best) {
      best = s.total;
      winner = std::string(to_string(s.codec));
    }
  EXPECT_EQ(report.winner, winner);
}

TEST(Config, ParseCodec) {
  EXPECT_EQ(parse_codec("none"), CodecChoice::none);
  EXPECT_EQ(parse_codec("dedup+vbyte"), CodecChoice::dedup_vbyte);
  EXPECT_EQ(code_of([] { parse_codec("lz4"); }), ErrorCode::invalid_argument);
  OrchestrationConfig cfg;
  cfg.inbound_codec = CodecChoice::vbyte;
  EXPECT_EQ(cfg.outbound(), CodecChoice::vbyte);
  cfg.outbound_codec = CodecChoice::none;
  EXPECT_EQ(cfg.outbound(), CodecChoice::none);
}
