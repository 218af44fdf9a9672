#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ppim/error.hpp"
#include "ppim/kernels/poly.hpp"
#include "ppim/kernels/registry.hpp"
#include "ppim/protocols/backend.hpp"
#include "ppim/protocols/rng.hpp"

namespace ppim::protocols {

using kernels::u128;

/// Symmetric-key textbook BFV over Z_q[x]/(x^n + 1) with plaintext modulus t.
/// Functional-testing parameters only; no security claims.
struct BfvParams {
  kernels::RingPtr ring;
  std::uint64_t t = 2;
  std::uint64_t noise_bound = 1;  // B: fresh noise uniform on [-B, B]

  std::uint64_t q() const { return ring->q(); }
  std::size_t n() const { return ring->n(); }
  std::uint64_t delta() const { return q() / t; }
  std::uint64_t q_mod_t() const { return q() % t; }

  /// A ciphertext with |noise| <= bound decrypts correctly iff
  /// t * bound + (q mod t) * (t - 1) < q / 2.
  bool decryptable(std::uint64_t bound) const {
    const u128 lhs = static_cast<u128>(t) * bound + static_cast<u128>(q_mod_t()) * (t - 1);
    return 2 * lhs < q();
  }

  /// Largest k such that the sum of k fresh ciphertexts still decrypts:
  /// its noise is at most k * B + (k - 1) * (q mod t).
  std::uint64_t max_fresh_additions() const {
    const std::uint64_t r = q_mod_t();
    std::uint64_t lo = 0, hi = q();
    while (lo < hi) {
      const std::uint64_t mid = lo + (hi - lo + 1) / 2;
      const u128 bound = static_cast<u128>(mid) * noise_bound + static_cast<u128>(mid - 1) * r;
      if (bound < q() && decryptable(static_cast<std::uint64_t>(bound)))
        lo = mid;
      else
        hi = mid - 1;
    }
    return lo;
  }

  bool operator==(const BfvParams& o) const {
    return ring->same_as(*o.ring) && t == o.t && noise_bound == o.noise_bound;
  }
};

inline BfvParams make_bfv_params(std::size_t n, std::uint64_t q, std::uint64_t t, std::uint64_t noise_bound) {
  BfvParams p{kernels::cached_ring(n, q), t, noise_bound};
  if (t < 2 || t >= q) fail(ErrorCode::invalid_argument, "plaintext modulus must satisfy 2 <= t < q");
  if (!p.decryptable(noise_bound)) fail(ErrorCode::invalid_argument, "fresh noise bound too large for q/t");
  return p;
}

/// n = 1024, q = 132120577, t = 17, B = 6.
inline BfvParams shipped_bfv_params() { return make_bfv_params(1024, 132120577, 17, 6); }

struct SecretKey {
  kernels::Polynomial s;
};

/// (c0, c1) with c0 + c1*s = delta*m + e (mod q). `noise_bound` is a proven
/// upper bound on |e| carried through every homomorphic operation.
struct BfvCiphertext {
  BfvParams params;
  kernels::Polynomial c0;
  kernels::Polynomial c1;
  std::uint64_t noise_bound = 0;
};

using Plaintext = std::vector<std::uint64_t>;

inline Plaintext constant_plaintext(const BfvParams& p, std::uint64_t value) {
  Plaintext m(p.n(), 0);
  m[0] = value;
  return m;
}

namespace detail {

inline void check_plaintext(const BfvParams& p, std::span<const std::uint64_t> m) {
  if (m.size() != p.n()) fail(ErrorCode::wrong_length, "plaintext must have n coefficients");
  for (auto c : m)
    if (c >= p.t) fail(ErrorCode::plaintext_out_of_range, std::to_string(c) + " >= t = " + std::to_string(p.t));
}

inline std::uint64_t lift_signed(std::int64_t v, std::uint64_t q) {
  return v >= 0 ? static_cast<std::uint64_t>(v) % q : q - (static_cast<std::uint64_t>(-v) % q);
}

inline void require_same_params(const BfvParams& a, const BfvParams& b) {
  if (!(a == b)) fail(ErrorCode::params_mismatch, "ciphertexts under different parameters");
}

}  // namespace detail

/// Ternary secret key, coefficients uniform in {-1, 0, 1}.
inline SecretKey bfv_keygen(const BfvParams& p, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::uint64_t> s(p.n());
  for (auto& c : s) c = detail::lift_signed(rng.centered(1), p.q());
  return {kernels::Polynomial(p.ring, std::move(s))};
}

inline BfvCiphertext bfv_encrypt(const BfvParams& p, const SecretKey& sk, std::span<const std::uint64_t> m,
                                 std::uint64_t seed, VectorOps& ops = host_ops()) {
  detail::check_plaintext(p, m);
  Rng rng(seed);
  const std::uint64_t q = p.q();
  const auto& mod = p.ring->mod();
  std::vector<std::uint64_t> a(p.n()), body(p.n());
  for (auto& c : a) c = rng.uniform(q);
  kernels::Polynomial a_poly(p.ring, std::move(a));
  const auto as = ops.poly_mul(a_poly, sk.s);
  const std::uint64_t delta = p.delta();
  for (std::size_t i = 0; i < p.n(); ++i) {
    const std::uint64_t e = detail::lift_signed(rng.centered(p.noise_bound), q);
    body[i] = mod.add(mod.sub(mod.mul(delta, m[i]), as[i]), e);
  }
  return {p, kernels::Polynomial(p.ring, std::move(body)), std::move(a_poly), p.noise_bound};
}

/// Round(t/q * (c0 + c1*s)) mod t. Signals noise-overflow instead of
/// returning a plaintext it cannot vouch for: the carried bound must admit
/// correct rounding, and the measured noise must respect that bound.
inline Plaintext bfv_decrypt(const BfvParams& p, const SecretKey& sk, const BfvCiphertext& ct,
                             VectorOps& ops = host_ops()) {
  detail::require_same_params(p, ct.params);
  if (!p.decryptable(ct.noise_bound))
    fail(ErrorCode::noise_overflow, "noise bound " + std::to_string(ct.noise_bound) + " exceeds the decryption budget");
  const std::uint64_t q = p.q();
  const std::uint64_t t = p.t;
  const auto& mod = p.ring->mod();
  const auto c1s = ops.poly_mul(ct.c1, sk.s);
  Plaintext m(p.n());
  for (std::size_t i = 0; i < p.n(); ++i) {
    const std::uint64_t v = mod.add(ct.c0[i], c1s[i]);
    const auto rounded = static_cast<std::uint64_t>((static_cast<u128>(v) * t + q / 2) / q);
    m[i] = rounded % t;
    const std::uint64_t residual = mod.sub(v, mod.mul(p.delta(), m[i]));
    const std::uint64_t magnitude = residual > q / 2 ? q - residual : residual;
    if (magnitude > ct.noise_bound)
      fail(ErrorCode::noise_overflow, "measured noise " + std::to_string(magnitude) + " exceeds tracked bound " +
                                          std::to_string(ct.noise_bound));
  }
  return m;
}

inline BfvCiphertext bfv_add(const BfvCiphertext& x, const BfvCiphertext& y, VectorOps& ops = host_ops()) {
  detail::require_same_params(x.params, y.params);
  const auto& p = x.params;
  // A carry of the plaintext sum past t shifts the noise by -(q mod t).
  const std::uint64_t bound = x.noise_bound + y.noise_bound + p.q_mod_t();
  if (!p.decryptable(bound)) fail(ErrorCode::noise_overflow, "addition would exceed the noise budget");
  const auto& mod = p.ring->mod();
  return {p, kernels::Polynomial(p.ring, ops.add(mod, x.c0.coeffs(), y.c0.coeffs())),
          kernels::Polynomial(p.ring, ops.add(mod, x.c1.coeffs(), y.c1.coeffs())), bound};
}

/// Multiplies by a plaintext polynomial with coefficients in [0, t).
inline BfvCiphertext bfv_mul_plain(const BfvCiphertext& x, std::span<const std::uint64_t> plain,
                                   VectorOps& ops = host_ops()) {
  const auto& p = x.params;
  detail::check_plaintext(p, plain);
  std::uint64_t l1 = 0;
  for (auto c : plain) l1 += c;
  // noise' = e*pt - (q mod t) * floor(m*pt / t), with |m*pt| <= (t-1) * l1.
  const u128 grown = static_cast<u128>(x.noise_bound) * l1 +
                     static_cast<u128>(p.q_mod_t()) * ((static_cast<u128>(p.t - 1) * l1) / p.t + 1);
  if (grown >= p.q() || !p.decryptable(static_cast<std::uint64_t>(grown)))
    fail(ErrorCode::noise_overflow, "plaintext multiplication would exceed the noise budget");
  const kernels::Polynomial pt(p.ring, Plaintext(plain.begin(), plain.end()));
  return {p, ops.poly_mul(x.c0, pt), ops.poly_mul(x.c1, pt), static_cast<std::uint64_t>(grown)};
}

}  // namespace ppim::protocols
