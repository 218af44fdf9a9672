#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ppim/error.hpp"
#include "ppim/kernels/modarith.hpp"
#include "ppim/kernels/poly.hpp"
#include "ppim/kernels/vector_ops.hpp"
#include "ppim/pim/tasklets.hpp"

namespace ppim::kernels {

/// Kernel arguments. Which fields matter depends on the kernel.
struct KernelParams {
  std::uint64_t modulus = 0;  // dot, mod_*, ntt, poly_mul
  std::size_t degree = 0;     // ntt, poly_mul
};

/// How per-DPU outputs combine on the host.
enum class Aggregation { concat, sum_mod };

struct KernelOutput {
  std::vector<std::uint32_t> values;
  std::vector<std::uint64_t> stages;  // per-stage critical element counts
  std::uint64_t work = 0;             // total element operations
};

using Inputs = std::span<const std::span<const std::uint32_t>>;

/// A computation-layer kernel as the orchestrator sees it: a pure function
/// over equal-length input slices, tasklet-partitioned.
struct KernelSpec {
  std::string id;
  std::size_t arity = 1;
  Aggregation aggregation = Aggregation::concat;
  std::uint64_t wram_per_tasklet = 0;
  std::function<void(const KernelParams&)> validate;
  /// Elements per indivisible unit; chunks are sized in whole units.
  std::function<std::size_t(const KernelParams&)> granule;
  std::function<std::uint64_t(const KernelParams&)> wram_shared;
  std::function<KernelOutput(Inputs, const KernelParams&, unsigned n_tasklets)> run;
};

inline constexpr std::uint64_t kWramTileBytes = 256;

/// Rings are costly to build; kernels share one immutable instance per (n, q).
inline RingPtr cached_ring(std::size_t n, std::uint64_t q) {
  static std::mutex mu;
  static std::map<std::pair<std::size_t, std::uint64_t>, RingPtr> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[{n, q}];
  if (!slot) slot = make_ring(n, q);
  return slot;
}

namespace detail {

inline void need_modulus32(const KernelParams& p) {
  if (p.modulus == 0 || p.modulus > 0xFFFFFFFFull)
    fail(ErrorCode::config_invalid, "kernel needs a prime modulus below 2^32");
  if (!is_prime(p.modulus)) fail(ErrorCode::config_invalid, "modulus " + std::to_string(p.modulus) + " is not prime");
}

inline void need_ring(const KernelParams& p) {
  need_modulus32(p);
  if (p.degree < 2 || (p.degree & (p.degree - 1)) || (p.modulus - 1) % (2 * p.degree))
    fail(ErrorCode::config_invalid, "degree must be a power of two with q = 1 mod 2n");
}

inline void check_below(std::span<const std::uint32_t> v, std::uint64_t q) {
  for (auto x : v)
    if (x >= q) fail(ErrorCode::input_out_of_range, std::to_string(x) + " not reduced mod " + std::to_string(q));
}

template <class Op>
KernelOutput elementwise(Inputs in, unsigned n_tasklets, Op op) {
  const std::size_t len = in.empty() ? 0 : in[0].size();
  KernelOutput out;
  out.values.resize(len);
  pim::for_each_tasklet(len, n_tasklets, [&](unsigned, pim::IndexRange r) {
    for (std::size_t i = r.begin; i < r.end; ++i) out.values[i] = op(i);
  });
  out.stages = {pim::ceil_div(len, n_tasklets)};
  out.work = len;
  return out;
}

inline std::size_t one(const KernelParams&) { return 1; }
inline std::uint64_t no_shared(const KernelParams&) { return 0; }
inline void no_validate(const KernelParams&) {}

inline KernelOutput run_identity(Inputs in, const KernelParams&, unsigned t) {
  return elementwise(in, t, [&](std::size_t i) { return in[0][i]; });
}

inline KernelOutput run_vec_add(Inputs in, const KernelParams&, unsigned t) {
  return elementwise(in, t, [&](std::size_t i) { return in[0][i] + in[1][i]; });
}

inline KernelOutput run_mod_add(Inputs in, const KernelParams& p, unsigned t) {
  check_below(in[0], p.modulus);
  check_below(in[1], p.modulus);
  const ModulusContext m(p.modulus);
  return elementwise(in, t, [&](std::size_t i) { return static_cast<std::uint32_t>(m.add(in[0][i], in[1][i])); });
}

inline KernelOutput run_mod_sub(Inputs in, const KernelParams& p, unsigned t) {
  check_below(in[0], p.modulus);
  check_below(in[1], p.modulus);
  const ModulusContext m(p.modulus);
  return elementwise(in, t, [&](std::size_t i) { return static_cast<std::uint32_t>(m.sub(in[0][i], in[1][i])); });
}

inline KernelOutput run_mod_mul(Inputs in, const KernelParams& p, unsigned t) {
  check_below(in[0], p.modulus);
  check_below(in[1], p.modulus);
  const ModulusContext m(p.modulus);
  return elementwise(in, t, [&](std::size_t i) { return static_cast<std::uint32_t>(m.mul(in[0][i], in[1][i])); });
}

// Each tasklet accumulates its index range; tasklet partials are then
// combined by a single tasklet after a barrier.
inline KernelOutput run_dot(Inputs in, const KernelParams& p, unsigned t) {
  check_below(in[0], p.modulus);
  check_below(in[1], p.modulus);
  const ModulusContext m(p.modulus);
  const std::size_t len = in[0].size();
  std::vector<std::uint64_t> partial(t, 0);
  pim::for_each_tasklet(len, t, [&](unsigned tid, pim::IndexRange r) {
    for (std::size_t i = r.begin; i < r.end; ++i) partial[tid] = m.add(partial[tid], m.mul(in[0][i], in[1][i]));
  });
  std::uint64_t acc = 0;
  for (auto v : partial) acc = m.add(acc, v);
  KernelOutput out;
  out.values = {static_cast<std::uint32_t>(acc)};
  out.stages = {pim::ceil_div(len, t), t};
  out.work = len;
  return out;
}

inline std::size_t ring_granule(const KernelParams& p) { return p.degree; }
inline std::uint64_t ring_shared_one(const KernelParams& p) { return 8 * p.degree; }
inline std::uint64_t ring_shared_two(const KernelParams& p) { return 16 * p.degree; }

inline KernelOutput run_ntt(Inputs in, const KernelParams& p, unsigned t) {
  check_below(in[0], p.modulus);
  const auto ring = cached_ring(p.degree, p.modulus);
  const std::size_t n = p.degree;
  KernelOutput out;
  out.values.resize(in[0].size());
  std::vector<std::uint64_t> buf(n);
  for (std::size_t base = 0; base < in[0].size(); base += n) {
    std::copy_n(in[0].begin() + static_cast<std::ptrdiff_t>(base), n, buf.begin());
    std::vector<std::uint64_t> stages;
    ntt_forward_inplace(*ring, buf, t, &stages);
    for (std::size_t i = 0; i < n; ++i) out.values[base + i] = static_cast<std::uint32_t>(buf[i]);
    out.stages.insert(out.stages.end(), stages.begin(), stages.end());
    out.work += n + (n / 2) * ring->log_n();
  }
  return out;
}

inline KernelOutput run_poly_mul(Inputs in, const KernelParams& p, unsigned t) {
  check_below(in[0], p.modulus);
  check_below(in[1], p.modulus);
  const auto ring = cached_ring(p.degree, p.modulus);
  const auto& m = ring->mod();
  const std::size_t n = p.degree;
  KernelOutput out;
  out.values.resize(in[0].size());
  std::vector<std::uint64_t> fa(n), fb(n);
  for (std::size_t base = 0; base < in[0].size(); base += n) {
    std::copy_n(in[0].begin() + static_cast<std::ptrdiff_t>(base), n, fa.begin());
    std::copy_n(in[1].begin() + static_cast<std::ptrdiff_t>(base), n, fb.begin());
    ntt_forward_inplace(*ring, fa, t, &out.stages);
    ntt_forward_inplace(*ring, fb, t, &out.stages);
    pim::for_each_tasklet(n, t, [&](unsigned, pim::IndexRange r) {
      for (std::size_t i = r.begin; i < r.end; ++i) fa[i] = m.mul(fa[i], fb[i]);
    });
    out.stages.push_back(pim::ceil_div(n, t));
    ntt_inverse_inplace(*ring, fa, t, &out.stages);
    for (std::size_t i = 0; i < n; ++i) out.values[base + i] = static_cast<std::uint32_t>(fa[i]);
    out.work += 4 * n + 3 * (n / 2) * ring->log_n();
  }
  return out;
}

inline std::map<std::string, KernelSpec> build_registry() {
  std::map<std::string, KernelSpec> r;
  auto add = [&](KernelSpec s) { r.emplace(s.id, std::move(s)); };
  add({"identity", 1, Aggregation::concat, 2 * kWramTileBytes, no_validate, one, no_shared, run_identity});
  add({"vec_add", 2, Aggregation::concat, 3 * kWramTileBytes, no_validate, one, no_shared, run_vec_add});
  add({"mod_add", 2, Aggregation::concat, 3 * kWramTileBytes, need_modulus32, one, no_shared, run_mod_add});
  add({"mod_sub", 2, Aggregation::concat, 3 * kWramTileBytes, need_modulus32, one, no_shared, run_mod_sub});
  add({"mod_mul", 2, Aggregation::concat, 3 * kWramTileBytes, need_modulus32, one, no_shared, run_mod_mul});
  add({"dot", 2, Aggregation::sum_mod, 2 * kWramTileBytes + 8, need_modulus32, one, no_shared, run_dot});
  add({"ntt", 1, Aggregation::concat, 0, need_ring, ring_granule, ring_shared_one, run_ntt});
  add({"poly_mul", 2, Aggregation::concat, 0, need_ring, ring_granule, ring_shared_two, run_poly_mul});
  return r;
}

}  // namespace detail

/// Kernels resolvable by id from the orchestrator and the CLI.
inline const std::map<std::string, KernelSpec>& kernel_registry() {
  static const auto registry = detail::build_registry();
  return registry;
}

inline const KernelSpec& find_kernel(const std::string& id) {
  const auto& r = kernel_registry();
  const auto it = r.find(id);
  if (it == r.end()) fail(ErrorCode::unknown_kernel, "no kernel named '" + id + "'");
  return it->second;
}

}  // namespace ppim::kernels
