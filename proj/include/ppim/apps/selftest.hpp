#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "ppim/apps/bench.hpp"
#include "ppim/compress/chunk.hpp"
#include "ppim/compress/dedup.hpp"
#include "ppim/compress/vbyte.hpp"
#include "ppim/kernels/poly.hpp"
#include "ppim/orchestrate/pipeline.hpp"
#include "ppim/protocols/bfv.hpp"
#include "ppim/protocols/rng.hpp"
#include "ppim/protocols/sharing.hpp"

namespace ppim::apps {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

namespace selftest {

using protocols::Rng;

inline constexpr std::uint32_t kBoundaryValues[] = {0, 1, 127, 128, 16383, 16384, (1u << 21) - 1, 1u << 21,
                                                    (1u << 28) - 1, 1u << 28, 0xFFFFFFFFu};

/// Random values with a randomly chosen width, sprinkled with varint
/// boundary values and, sometimes, long repeats.
inline std::vector<std::uint32_t> adversarial_values(std::size_t n, Rng& rng) {
  const unsigned bits = 1 + static_cast<unsigned>(rng.uniform(32));
  auto v = random_values(n, bits, rng);
  for (auto& x : v)
    if (rng.uniform(8) == 0) x = kBoundaryValues[rng.uniform(std::size(kBoundaryValues))];
  if (n > 0 && rng.uniform(3) == 0) {
    const std::size_t period = 1 + rng.uniform(std::min<std::size_t>(n, 128));
    for (std::size_t i = period; i < n; ++i) v[i] = v[i % period];
  }
  return v;
}

inline CheckResult pipeline_oracle(std::uint64_t seed, std::size_t inputs_per_cell = 50) {
  Rng rng(seed);
  auto system = pim::create_system(16);
  const std::uint64_t q = 2147483647;
  std::size_t runs = 0;
  for (std::size_t n : {1, 4, 16})
    for (unsigned t : {1u, 8u, 24u})
      for (auto codec : {orchestrate::CodecChoice::none, orchestrate::CodecChoice::vbyte,
                         orchestrate::CodecChoice::dedup_vbyte})
        for (const char* kernel : {"vec_add", "identity", "dot"})
          for (std::size_t trial = 0; trial < inputs_per_cell; ++trial) {
            orchestrate::OrchestrationConfig cfg;
            cfg.n_dpus = n;
            cfg.tasklets_per_dpu = t;
            cfg.inbound_codec = codec;
            cfg.blocks_per_chunk = 1 + rng.uniform(32);
            cfg.dedup_unit = 1 + rng.uniform(64);
            const std::size_t len = rng.uniform(3000);
            const bool is_dot = std::string(kernel) == "dot";
            auto a = adversarial_values(len, rng);
            auto b = adversarial_values(len, rng);
            if (is_dot)
              for (std::size_t i = 0; i < len; ++i) {
                a[i] %= q;
                b[i] %= q;
              }
            const kernels::KernelParams params{is_dot ? q : 0, 0};
            std::vector<std::span<const std::uint32_t>> inputs = {a};
            if (std::string(kernel) != "identity") inputs.push_back(b);
            const auto job = orchestrate::run_pipeline(system, cfg, kernel, params, inputs);
            const auto cpu = orchestrate::run_cpu_baseline(kernel, params, inputs);
            ++runs;
            if (job.output != cpu.output)
              return {"", false, std::string(kernel) + " mismatch at N=" + std::to_string(n) + " T=" + std::to_string(t) +
                                     " codec=" + std::string(orchestrate::to_string(codec)) + " len=" + std::to_string(len)};
          }
  return {"", true, std::to_string(runs) + " pipeline runs bit-identical to the CPU baseline"};
}

inline CheckResult compression_roundtrips(std::uint64_t seed) {
  Rng rng(seed);
  for (int i = 0; i < 10000; ++i) {
    const auto v = adversarial_values(rng.uniform(200), rng);
    if (compress::vbyte_decode(compress::vbyte_encode(v), v.size()) != v)
      return {"", false, "vbyte roundtrip failed at trial " + std::to_string(i)};
  }
  for (int i = 0; i < 1000; ++i) {
    const auto v = adversarial_values(rng.uniform(2000), rng);
    const std::size_t unit = 1 + rng.uniform(100);
    if (compress::dedup_decode(compress::dedup_encode(v, unit)) != v)
      return {"", false, "dedup roundtrip failed at trial " + std::to_string(i)};
  }
  for (int i = 0; i < 200; ++i) {
    const auto v = adversarial_values(rng.uniform(20000), rng);
    const auto codec = rng.uniform(2) ? compress::Codec::vbyte : compress::Codec::dedup_vbyte;
    const auto chunk = compress::encode_chunk(v, 1 + rng.uniform(64), codec, 1 + rng.uniform(64));
    const auto seq = compress::decode_chunk(chunk);
    if (seq != v) return {"", false, "sequential chunk decode failed"};
    for (unsigned w : {1u, 3u, 8u, 24u})
      if (compress::decode_chunk_parallel(chunk, w) != seq)
        return {"", false, "parallel decode with " + std::to_string(w) + " workers differs"};
  }
  return {"", true, "10000 vbyte, 1000 dedup, 200x4 parallel-decode roundtrips"};
}

inline CheckResult ntt_correctness(std::uint64_t seed) {
  Rng rng(seed);
  auto run = [&](kernels::RingParams rp, int pairs) -> std::string {
    const auto ring = kernels::make_ring(rp.n, rp.q);
    auto random_poly = [&] {
      std::vector<std::uint64_t> c(rp.n);
      for (auto& x : c) x = rng.uniform(rp.q);
      return kernels::Polynomial(ring, std::move(c));
    };
    for (int i = 0; i < pairs; ++i) {
      const auto a = random_poly();
      const auto b = random_poly();
      const auto fwd = kernels::ntt_forward(*ring, a.coeffs());
      const auto back = kernels::ntt_inverse(*ring, fwd);
      if (!std::equal(back.begin(), back.end(), a.coeffs().begin())) return "INTT(NTT(a)) != a";
      if (!(kernels::poly_mul_ntt(a, b) == kernels::poly_mul_schoolbook(a, b))) return "NTT product != schoolbook";
    }
    return {};
  };
  if (auto e = run(kernels::kKyberRing, 1000); !e.empty()) return {"", false, e + " at n=256"};
  if (auto e = run(kernels::kBfvRing, 100); !e.empty()) return {"", false, e + " at n=1024"};
  return {"", true, "1000 pairs at (256, 7681), 100 pairs at (1024, 132120577)"};
}

inline CheckResult protocol_correctness(std::uint64_t seed) {
  Rng rng(seed);
  const std::uint64_t q = 2147483647;
  const kernels::ModulusContext m(q);
  for (int i = 0; i < 1000; ++i) {
    const std::size_t parties = 2 + rng.uniform(4);
    const std::size_t len = 1 + rng.uniform(16);
    protocols::Vec x(len), y(len);
    for (auto& v : x) v = rng.uniform(q);
    for (auto& v : y) v = rng.uniform(q);
    const auto xs = protocols::share(x, parties, q, rng.next());
    const auto ys = protocols::share(y, parties, q, rng.next());
    if (protocols::reconstruct(xs) != x) return {"", false, "share/reconstruct identity failed"};
    if (protocols::reconstruct(protocols::mpc_add(xs, ys)) != kernels::mod_vec_add(m, x, y))
      return {"", false, "mpc_add differs from plaintext"};
    auto triple = protocols::triple_gen(parties, q, rng.next(), len);
    if (protocols::reconstruct(protocols::mpc_mul(xs, ys, triple)) != kernels::mod_vec_mul(m, x, y))
      return {"", false, "mpc_mul differs from plaintext"};
  }
  const auto params = protocols::shipped_bfv_params();
  const auto sk = protocols::bfv_keygen(params, rng.next());
  auto random_plain = [&] {
    protocols::Plaintext p(params.n());
    for (auto& c : p) c = rng.uniform(params.t);
    return p;
  };
  for (int i = 0; i < 1000; ++i) {
    const auto m1 = random_plain();
    const auto m2 = random_plain();
    const auto c1 = protocols::bfv_encrypt(params, sk, m1, rng.next());
    const auto c2 = protocols::bfv_encrypt(params, sk, m2, rng.next());
    if (protocols::bfv_decrypt(params, sk, c1) != m1) return {"", false, "BFV decrypt(encrypt(m)) != m"};
    auto sum = protocols::bfv_decrypt(params, sk, protocols::bfv_add(c1, c2));
    for (std::size_t k = 0; k < sum.size(); ++k)
      if (sum[k] != (m1[k] + m2[k]) % params.t) return {"", false, "BFV homomorphic add incorrect"};
  }
  // Past the budget the library must refuse, never return garbage.
  auto ct = protocols::bfv_encrypt(params, sk, random_plain(), rng.next());
  ct.noise_bound = params.delta();
  try {
    protocols::bfv_decrypt(params, sk, ct);
    return {"", false, "noise overflow not signaled"};
  } catch (const Error& e) {
    if (e.code() != ErrorCode::noise_overflow) return {"", false, "wrong error for noise overflow"};
  }
  return {"", true, "1000 trials each: sharing, mpc_add, mpc_mul, BFV roundtrip and add; overflow signaled"};
}

inline CheckResult strategy_sanity(std::uint64_t seed) {
  orchestrate::OrchestrationConfig cfg;
  cfg.n_dpus = 64;
  cfg.tasklets_per_dpu = 16;
  Rng rng(seed);
  auto system = pim::create_system(64);
  const std::size_t size = 1u << 20;
  auto total = [&](unsigned bits, orchestrate::CodecChoice c) {
    const auto a = random_values(size, bits, rng);
    const auto b = random_values(size, bits, rng);
    const std::span<const std::uint32_t> inputs[] = {a, b};
    const auto cmp = orchestrate::compare_strategies(system, cfg, "vec_add", {}, inputs);
    return std::pair{cmp.get(orchestrate::CodecChoice::none).total, cmp.get(c).total};
  };
  const auto [raw_small, vbyte_small] = total(7, orchestrate::CodecChoice::vbyte);
  if (!(vbyte_small < raw_small)) return {"", false, "vbyte did not beat raw copy on 7-bit data"};
  const auto [raw_wide, vbyte_wide] = total(32, orchestrate::CodecChoice::vbyte);
  if (!(raw_wide <= vbyte_wide)) return {"", false, "vbyte beat raw copy on incompressible data"};
  char buf[160];
  std::snprintf(buf, sizeof buf, "7-bit: vbyte %.4fs < raw %.4fs; 32-bit: raw %.4fs <= vbyte %.4fs", vbyte_small,
                raw_small, raw_wide, vbyte_wide);
  return {"", true, buf};
}

}  // namespace selftest

/// Oracle-equivalence, roundtrip, NTT, protocol and strategy checks.
inline std::vector<CheckResult> run_selftest(std::uint64_t seed) {
  const std::vector<std::pair<std::string, std::function<CheckResult(std::uint64_t)>>> checks = {
      {"pipeline-oracle-equivalence", [](std::uint64_t s) { return selftest::pipeline_oracle(s); }},
      {"compression-roundtrips", selftest::compression_roundtrips},
      {"ntt-correctness", selftest::ntt_correctness},
      {"protocol-correctness", selftest::protocol_correctness},
      {"strategy-comparison", selftest::strategy_sanity},
  };
  std::vector<CheckResult> results;
  for (std::size_t i = 0; i < checks.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    CheckResult r;
    try {
      r = checks[i].second(seed + i);
    } catch (const std::exception& e) {
      r = {"", false, std::string("exception: ") + e.what()};
    }
    r.name = checks[i].first;
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    results.push_back(std::move(r));
  }
  return results;
}

}  // namespace ppim::apps
