#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ppim/apps/pipeline_ops.hpp"
#include "ppim/error.hpp"
#include "ppim/protocols/bfv.hpp"
#include "ppim/protocols/rng.hpp"
#include "ppim/protocols/sharing.hpp"

namespace ppim::apps {

namespace detail {

inline protocols::Shared slice(const protocols::Shared& s, std::size_t begin, std::size_t end) {
  protocols::Shared out{s.modulus, {}};
  for (const auto& sh : s.shares) {
    protocols::Vec v(end - begin, 0);
    for (std::size_t k = begin; k < std::min(end, sh.value.size()); ++k) v[k - begin] = sh.value[k];
    out.shares.push_back({sh.party_id, std::move(v)});
  }
  return out;
}

}  // namespace detail

/// Secret-shares both vectors, multiplies element-wise with one Beaver
/// triple, and folds the products with local additions. Every arithmetic
/// step is a job on `ops`. Returns x . y mod q.
inline std::uint64_t app_secure_dot_product(std::span<const std::uint64_t> x, std::span<const std::uint64_t> y,
                                            std::size_t n_parties, std::uint64_t q, std::uint64_t seed,
                                            protocols::VectorOps& ops = protocols::host_ops()) {
  if (x.size() != y.size()) fail(ErrorCode::mismatch, "dot product of different lengths");
  if (x.empty()) return 0;
  protocols::Rng rng(seed);
  const auto xs = protocols::share(x, n_parties, q, rng.next());
  const auto ys = protocols::share(y, n_parties, q, rng.next());
  auto triple = protocols::triple_gen(n_parties, q, rng.next(), x.size());
  auto z = protocols::mpc_mul(xs, ys, triple, ops);
  while (z.length() > 1) {
    const std::size_t half = (z.length() + 1) / 2;
    // An odd tail pairs with a zero sharing.
    z = protocols::mpc_add(detail::slice(z, 0, half), detail::slice(z, half, 2 * half), ops);
  }
  return protocols::reconstruct(z, ops)[0];
}

inline std::uint64_t app_secure_dot_product(std::span<const std::uint64_t> x, std::span<const std::uint64_t> y,
                                            std::size_t n_parties, std::uint64_t q, std::uint64_t seed,
                                            pim::PimSystem& system, const orchestrate::OrchestrationConfig& cfg) {
  PipelineOps ops(system, cfg);
  return app_secure_dot_product(x, y, n_parties, q, seed, ops);
}

/// Encrypts each value as a constant polynomial, sums the ciphertexts
/// pairwise on `ops` and decrypts. Inputs longer than
/// params.max_fresh_additions() are rejected with noise-overflow.
inline std::uint64_t app_encrypted_sum(std::span<const std::uint64_t> values, const protocols::BfvParams& params,
                                       std::uint64_t seed, protocols::VectorOps& ops = protocols::host_ops()) {
  if (values.size() > params.max_fresh_additions())
    fail(ErrorCode::noise_overflow, std::to_string(values.size()) + " additions exceed the budget of " +
                                        std::to_string(params.max_fresh_additions()));
  protocols::Rng rng(seed);
  const auto sk = protocols::bfv_keygen(params, rng.next());
  std::vector<protocols::BfvCiphertext> level;
  for (auto v : values)
    level.push_back(protocols::bfv_encrypt(params, sk, protocols::constant_plaintext(params, v), rng.next()));
  if (level.empty())
    level.push_back(protocols::bfv_encrypt(params, sk, protocols::constant_plaintext(params, 0), rng.next()));
  while (level.size() > 1) {
    std::vector<protocols::BfvCiphertext> next;
    for (std::size_t i = 0; i + 1 < level.size(); i += 2) next.push_back(protocols::bfv_add(level[i], level[i + 1], ops));
    if (level.size() % 2) next.push_back(std::move(level.back()));
    level = std::move(next);
  }
  return protocols::bfv_decrypt(params, sk, level[0])[0];
}

inline std::uint64_t app_encrypted_sum(std::span<const std::uint64_t> values, const protocols::BfvParams& params,
                                       std::uint64_t seed, pim::PimSystem& system,
                                       const orchestrate::OrchestrationConfig& cfg) {
  PipelineOps ops(system, cfg);
  return app_encrypted_sum(values, params, seed, ops);
}

}  // namespace ppim::apps
