#pragma once

#include <bit>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "ppim/error.hpp"
#include "ppim/kernels/modarith.hpp"
#include "ppim/pim/tasklets.hpp"

namespace ppim::kernels {

/// Z_q[x] / (x^n + 1) with precomputed negacyclic NTT tables.
///
/// psi is a primitive 2n-th root of unity; the forward transform evaluates a
/// polynomial at psi^(2k+1) for k = 0..n-1, in natural order.
class PolyRing {
 public:
  PolyRing(std::size_t n, std::uint64_t q) : n_(n), ctx_(q) {
    if (n < 2 || !std::has_single_bit(n)) fail(ErrorCode::invalid_argument, "ring degree must be a power of two >= 2");
    if ((q - 1) % (2 * n) != 0)
      fail(ErrorCode::invalid_argument, "q = " + std::to_string(q) + " is not 1 mod 2n for n = " + std::to_string(n));
    log_n_ = static_cast<unsigned>(std::countr_zero(n));
    psi_ = find_psi();
    const std::uint64_t psi_inv = ctx_.inv(psi_);
    const std::uint64_t omega = ctx_.mul(psi_, psi_);
    const std::uint64_t omega_inv = ctx_.inv(omega);
    psi_pow_ = powers(psi_);
    psi_inv_pow_ = powers(psi_inv);
    omega_pow_ = powers(omega);
    omega_inv_pow_ = powers(omega_inv);
    n_inv_ = ctx_.inv(n % q);
    bitrev_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t r = 0;
      for (unsigned b = 0; b < log_n_; ++b) r |= ((i >> b) & 1) << (log_n_ - 1 - b);
      bitrev_[i] = r;
    }
  }

  std::size_t n() const noexcept { return n_; }
  std::uint64_t q() const noexcept { return ctx_.q(); }
  std::uint64_t psi() const noexcept { return psi_; }
  std::uint64_t n_inv() const noexcept { return n_inv_; }
  unsigned log_n() const noexcept { return log_n_; }
  const ModulusContext& mod() const noexcept { return ctx_; }

  std::span<const std::uint64_t> psi_powers() const noexcept { return psi_pow_; }
  std::span<const std::uint64_t> psi_inv_powers() const noexcept { return psi_inv_pow_; }
  std::span<const std::uint64_t> omega_powers() const noexcept { return omega_pow_; }
  std::span<const std::uint64_t> omega_inv_powers() const noexcept { return omega_inv_pow_; }
  std::span<const std::size_t> bit_reversal() const noexcept { return bitrev_; }

  bool same_as(const PolyRing& o) const noexcept { return n_ == o.n_ && q() == o.q() && psi_ == o.psi_; }

 private:
  std::uint64_t find_psi() const {
    const std::uint64_t q = ctx_.q();
    const std::uint64_t exp = (q - 1) / (2 * n_);
    for (std::uint64_t g = 2; g < q; ++g) {
      const std::uint64_t cand = ctx_.pow(g, exp);
      if (ctx_.pow(cand, n_) == q - 1) return cand;  // order exactly 2n
    }
    fail(ErrorCode::invalid_argument, "no primitive 2n-th root of unity");
  }

  std::vector<std::uint64_t> powers(std::uint64_t base) const {
    std::vector<std::uint64_t> out(n_);
    std::uint64_t x = 1;
    for (auto& v : out) {
      v = x;
      x = ctx_.mul(x, base);
    }
    return out;
  }

  std::size_t n_;
  unsigned log_n_ = 0;
  ModulusContext ctx_;
  std::uint64_t psi_ = 0;
  std::uint64_t n_inv_ = 0;
  std::vector<std::uint64_t> psi_pow_, psi_inv_pow_, omega_pow_, omega_inv_pow_;
  std::vector<std::size_t> bitrev_;
};

using RingPtr = std::shared_ptr<const PolyRing>;

inline RingPtr make_ring(std::size_t n, std::uint64_t q) { return std::make_shared<const PolyRing>(n, q); }

struct RingParams {
  std::size_t n;
  std::uint64_t q;
};

/// Parameter sets used throughout the tests; each q is prime and 1 mod 2n.
inline constexpr RingParams kToyRing{4, 17};
inline constexpr RingParams kKyberRing{256, 7681};
inline constexpr RingParams kBfvRing{1024, 132120577};

namespace detail {

inline void check_coeffs(const PolyRing& ring, std::span<const std::uint64_t> v) {
  if (v.size() != ring.n())
    fail(ErrorCode::wrong_length, "expected " + std::to_string(ring.n()) + " coefficients, got " + std::to_string(v.size()));
  for (auto c : v)
    if (c >= ring.q()) fail(ErrorCode::unreduced_input, std::to_string(c) + " >= q = " + std::to_string(ring.q()));
}

// Iterative radix-2 transform over `data` (already bit-reversed). Each stage
// runs n/2 butterflies split across tasklets by index range.
inline void butterfly_stages(const PolyRing& ring, std::span<std::uint64_t> data, std::span<const std::uint64_t> roots,
                             unsigned n_tasklets, std::vector<std::uint64_t>* stages) {
  const auto& m = ring.mod();
  const std::size_t n = ring.n();
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len / 2;
    const std::size_t stride = n / len;
    pim::for_each_tasklet(n / 2, n_tasklets, [&](unsigned, pim::IndexRange r) {
      for (std::size_t k = r.begin; k < r.end; ++k) {
        const std::size_t j = k % half;
        const std::size_t i0 = (k / half) * len + j;
        const std::size_t i1 = i0 + half;
        const std::uint64_t t = m.mul(data[i1], roots[j * stride]);
        data[i1] = m.sub(data[i0], t);
        data[i0] = m.add(data[i0], t);
      }
    });
    if (stages) stages->push_back(pim::ceil_div(n / 2, n_tasklets));
  }
}

inline void permute(const PolyRing& ring, std::span<std::uint64_t> data) {
  const auto rev = ring.bit_reversal();
  for (std::size_t i = 0; i < data.size(); ++i)
    if (i < rev[i]) std::swap(data[i], data[rev[i]]);
}

}  // namespace detail

/// In-place forward negacyclic NTT on reduced coefficients, with butterfly
/// stages partitioned over `n_tasklets`. Appends each barrier-separated
/// stage's per-tasklet critical element count to `stages` when given.
inline void ntt_forward_inplace(const PolyRing& ring, std::span<std::uint64_t> data, unsigned n_tasklets = 1,
                                std::vector<std::uint64_t>* stages = nullptr) {
  const auto& m = ring.mod();
  const auto psi = ring.psi_powers();
  pim::for_each_tasklet(ring.n(), n_tasklets, [&](unsigned, pim::IndexRange r) {
    for (std::size_t i = r.begin; i < r.end; ++i) data[i] = m.mul(data[i], psi[i]);
  });
  if (stages) stages->push_back(pim::ceil_div(ring.n(), n_tasklets));
  detail::permute(ring, data);
  detail::butterfly_stages(ring, data, ring.omega_powers(), n_tasklets, stages);
}

inline void ntt_inverse_inplace(const PolyRing& ring, std::span<std::uint64_t> data, unsigned n_tasklets = 1,
                                std::vector<std::uint64_t>* stages = nullptr) {
  const auto& m = ring.mod();
  detail::permute(ring, data);
  detail::butterfly_stages(ring, data, ring.omega_inv_powers(), n_tasklets, stages);
  const auto psi_inv = ring.psi_inv_powers();
  const std::uint64_t n_inv = ring.n_inv();
  pim::for_each_tasklet(ring.n(), n_tasklets, [&](unsigned, pim::IndexRange r) {
    for (std::size_t i = r.begin; i < r.end; ++i) data[i] = m.mul(m.mul(data[i], n_inv), psi_inv[i]);
  });
  if (stages) stages->push_back(pim::ceil_div(ring.n(), n_tasklets));
}

inline std::vector<std::uint64_t> ntt_forward(const PolyRing& ring, std::span<const std::uint64_t> coeffs) {
  detail::check_coeffs(ring, coeffs);
  std::vector<std::uint64_t> out(coeffs.begin(), coeffs.end());
  ntt_forward_inplace(ring, out);
  return out;
}

inline std::vector<std::uint64_t> ntt_inverse(const PolyRing& ring, std::span<const std::uint64_t> points) {
  detail::check_coeffs(ring, points);
  std::vector<std::uint64_t> out(points.begin(), points.end());
  ntt_inverse_inplace(ring, out);
  return out;
}

/// Element of a PolyRing. Coefficients are always length n and reduced.
class Polynomial {
 public:
  Polynomial(RingPtr ring, std::vector<std::uint64_t> coeffs) : ring_(std::move(ring)), coeffs_(std::move(coeffs)) {
    if (!ring_) fail(ErrorCode::invalid_argument, "polynomial without a ring");
    detail::check_coeffs(*ring_, coeffs_);
  }

  static Polynomial zero(RingPtr ring) {
    const std::size_t n = ring->n();
    return Polynomial(std::move(ring), std::vector<std::uint64_t>(n, 0));
  }

  static Polynomial constant(RingPtr ring, std::uint64_t c) {
    auto p = zero(std::move(ring));
    p.ring_->mod().check(c);
    p.coeffs_[0] = c;
    return p;
  }

  const PolyRing& ring() const noexcept { return *ring_; }
  const RingPtr& ring_ptr() const noexcept { return ring_; }
  std::span<const std::uint64_t> coeffs() const noexcept { return coeffs_; }
  std::uint64_t operator[](std::size_t i) const { return coeffs_.at(i); }

  bool operator==(const Polynomial& o) const { return ring_->same_as(*o.ring_) && coeffs_ == o.coeffs_; }

 private:
  RingPtr ring_;
  std::vector<std::uint64_t> coeffs_;
};

namespace detail {
inline void require_same_ring(const Polynomial& a, const Polynomial& b) {
  if (!a.ring().same_as(b.ring())) fail(ErrorCode::ring_mismatch, "operands belong to different rings");
}
}  // namespace detail

/// Reference O(n^2) negacyclic product: x^n wraps to -1.
inline Polynomial poly_mul_schoolbook(const Polynomial& a, const Polynomial& b) {
  detail::require_same_ring(a, b);
  const auto& m = a.ring().mod();
  const std::size_t n = a.ring().n();
  std::vector<std::uint64_t> c(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const std::uint64_t prod = m.mul(a[i], b[j]);
      const std::size_t k = i + j;
      if (k < n)
        c[k] = m.add(c[k], prod);
      else
        c[k - n] = m.sub(c[k - n], prod);
    }
  }
  return Polynomial(a.ring_ptr(), std::move(c));
}

inline Polynomial poly_mul_ntt(const Polynomial& a, const Polynomial& b) {
  detail::require_same_ring(a, b);
  const auto& ring = a.ring();
  const auto& m = ring.mod();
  std::vector<std::uint64_t> fa(a.coeffs().begin(), a.coeffs().end());
  std::vector<std::uint64_t> fb(b.coeffs().begin(), b.coeffs().end());
  ntt_forward_inplace(ring, fa);
  ntt_forward_inplace(ring, fb);
  for (std::size_t i = 0; i < fa.size(); ++i) fa[i] = m.mul(fa[i], fb[i]);
  ntt_inverse_inplace(ring, fa);
  return Polynomial(a.ring_ptr(), std::move(fa));
}

inline Polynomial poly_add(const Polynomial& a, const Polynomial& b) {
  detail::require_same_ring(a, b);
  const auto& m = a.ring().mod();
  std::vector<std::uint64_t> c(a.ring().n());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = m.add(a[i], b[i]);
  return Polynomial(a.ring_ptr(), std::move(c));
}

inline Polynomial poly_sub(const Polynomial& a, const Polynomial& b) {
  detail::require_same_ring(a, b);
  const auto& m = a.ring().mod();
  std::vector<std::uint64_t> c(a.ring().n());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = m.sub(a[i], b[i]);
  return Polynomial(a.ring_ptr(), std::move(c));
}

inline Polynomial poly_neg(const Polynomial& a) {
  const auto& m = a.ring().mod();
  std::vector<std::uint64_t> c(a.ring().n());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = m.neg(a[i]);
  return Polynomial(a.ring_ptr(), std::move(c));
}

inline Polynomial poly_scale(const Polynomial& a, std::uint64_t s) {
  const auto& m = a.ring().mod();
  s %= m.q();
  std::vector<std::uint64_t> c(a.ring().n());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = m.mul(a[i], s);
  return Polynomial(a.ring_ptr(), std::move(c));
}

}  // namespace ppim::kernels
