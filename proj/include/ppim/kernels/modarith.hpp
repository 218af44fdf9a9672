#pragma once

#include <cstdint>
#include <string>

#include "ppim/error.hpp"

namespace ppim::kernels {

using u128 = unsigned __int128;

constexpr std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

constexpr std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  std::uint64_t result = 1 % m;
  base %= m;
  while (exp) {
    if (exp & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return result;
}

/// Deterministic Miller-Rabin; the witness set is exact for all 64-bit n.
constexpr bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    std::uint64_t x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

/// Arithmetic modulo a prime q < 2^64. Reduction goes through 128-bit
/// products, so every result is exact.
class ModulusContext {
 public:
  explicit ModulusContext(std::uint64_t q) : q_(q) {
    if (!is_prime(q)) fail(ErrorCode::invalid_argument, "modulus " + std::to_string(q) + " is not prime");
  }

  std::uint64_t q() const noexcept { return q_; }

  void check(std::uint64_t a) const {
    if (a >= q_) fail(ErrorCode::input_out_of_range, std::to_string(a) + " not reduced mod " + std::to_string(q_));
  }

  // Unchecked forms for inner loops: callers guarantee a, b < q.
  std::uint64_t add(std::uint64_t a, std::uint64_t b) const noexcept {
    const std::uint64_t s = a + b;  // may wrap when q > 2^63
    return (s >= q_ || s < a) ? s - q_ : s;
  }
  std::uint64_t sub(std::uint64_t a, std::uint64_t b) const noexcept { return a >= b ? a - b : a + (q_ - b); }
  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const noexcept { return mul_mod(a, b, q_); }
  std::uint64_t neg(std::uint64_t a) const noexcept { return a == 0 ? 0 : q_ - a; }
  std::uint64_t pow(std::uint64_t a, std::uint64_t e) const noexcept { return pow_mod(a, e, q_); }
  /// Inverse by Fermat; a must be nonzero.
  std::uint64_t inv(std::uint64_t a) const {
    if (a % q_ == 0) fail(ErrorCode::invalid_argument, "zero has no inverse");
    return pow_mod(a, q_ - 2, q_);
  }

  bool operator==(const ModulusContext&) const = default;

 private:
  std::uint64_t q_;
};

inline std::uint64_t mod_add(const ModulusContext& ctx, std::uint64_t a, std::uint64_t b) {
  ctx.check(a);
  ctx.check(b);
  return ctx.add(a, b);
}

inline std::uint64_t mod_sub(const ModulusContext& ctx, std::uint64_t a, std::uint64_t b) {
  ctx.check(a);
  ctx.check(b);
  return ctx.sub(a, b);
}

inline std::uint64_t mod_mul(const ModulusContext& ctx, std::uint64_t a, std::uint64_t b) {
  ctx.check(a);
  ctx.check(b);
  return ctx.mul(a, b);
}

}  // namespace ppim::kernels
