#pragma once

#include <atomic>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ppim/error.hpp"
#include "ppim/kernels/modarith.hpp"
#include "ppim/protocols/backend.hpp"
#include "ppim/protocols/rng.hpp"

namespace ppim::protocols {

/// One party's additive share. Scalars are length-one vectors.
struct Share {
  std::size_t party_id = 0;
  Vec value;
  bool operator==(const Share&) const = default;
};

/// Shares of one secret held by parties 0..n-1, in party order.
struct Shared {
  std::uint64_t modulus = 0;
  std::vector<Share> shares;

  std::size_t parties() const noexcept { return shares.size(); }
  std::size_t length() const noexcept { return shares.empty() ? 0 : shares[0].value.size(); }
};

namespace detail {

inline void check_parties(const Shared& s) {
  if (s.shares.empty()) fail(ErrorCode::missing_share, "no shares");
  std::vector<bool> seen(s.shares.size(), false);
  for (const auto& sh : s.shares) {
    if (sh.party_id >= s.shares.size() || seen[sh.party_id])
      fail(ErrorCode::missing_share, "party set is not 0.." + std::to_string(s.shares.size() - 1));
    seen[sh.party_id] = true;
    if (sh.value.size() != s.length()) fail(ErrorCode::mismatch, "shares of different lengths");
  }
}

inline void check_compatible(const Shared& x, const Shared& y) {
  check_parties(x);
  check_parties(y);
  if (x.modulus != y.modulus) fail(ErrorCode::mismatch, "shares use different moduli");
  if (x.parties() != y.parties()) fail(ErrorCode::mismatch, "different party counts");
  if (x.length() != y.length()) fail(ErrorCode::mismatch, "different secret lengths");
  for (std::size_t i = 0; i < x.parties(); ++i)
    if (x.shares[i].party_id != y.shares[i].party_id) fail(ErrorCode::mismatch, "party order differs");
}

inline Shared share_with(std::span<const std::uint64_t> secret, std::size_t n_parties, const kernels::ModulusContext& m,
                         Rng& rng) {
  if (n_parties < 2) fail(ErrorCode::invalid_party_count, "additive sharing needs at least 2 parties");
  kernels::check_reduced(m, secret);
  Shared out{m.q(), {}};
  out.shares.resize(n_parties);
  Vec last(secret.begin(), secret.end());
  for (std::size_t p = 0; p + 1 < n_parties; ++p) {
    out.shares[p].party_id = p;
    out.shares[p].value.resize(secret.size());
    for (std::size_t k = 0; k < secret.size(); ++k) {
      const std::uint64_t r = rng.uniform(m.q());
      out.shares[p].value[k] = r;
      last[k] = m.sub(last[k], r);
    }
  }
  out.shares.back() = {n_parties - 1, std::move(last)};
  return out;
}

}  // namespace detail

/// Splits `secret` into `n_parties` uniformly random shares summing to it mod q.
inline Shared share(std::span<const std::uint64_t> secret, std::size_t n_parties, std::uint64_t q, std::uint64_t seed) {
  const kernels::ModulusContext m(q);
  Rng rng(seed);
  return detail::share_with(secret, n_parties, m, rng);
}

inline Shared share(std::uint64_t secret, std::size_t n_parties, std::uint64_t q, std::uint64_t seed) {
  return share(std::span(&secret, 1), n_parties, q, seed);
}

inline Vec reconstruct(const Shared& s, VectorOps& ops = host_ops()) {
  detail::check_parties(s);
  const kernels::ModulusContext m(s.modulus);
  Vec acc = s.shares[0].value;
  for (std::size_t p = 1; p < s.parties(); ++p) acc = ops.add(m, acc, s.shares[p].value);
  return acc;
}

/// Local addition: each party adds its own shares.
inline Shared mpc_add(const Shared& x, const Shared& y, VectorOps& ops = host_ops()) {
  detail::check_compatible(x, y);
  const kernels::ModulusContext m(x.modulus);
  Shared z{x.modulus, {}};
  for (std::size_t p = 0; p < x.parties(); ++p)
    z.shares.push_back({x.shares[p].party_id, ops.add(m, x.shares[p].value, y.shares[p].value)});
  return z;
}

/// Dealer-generated multiplication triple (a, b, c = a * b), single use.
class BeaverTriple {
 public:
  BeaverTriple(Shared a, Shared b, Shared c) : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)) {}
  BeaverTriple(BeaverTriple&& o) noexcept
      : a_(std::move(o.a_)), b_(std::move(o.b_)), c_(std::move(o.c_)), consumed_(o.consumed_.load()) {}
  BeaverTriple& operator=(BeaverTriple&&) = delete;
  BeaverTriple(const BeaverTriple&) = delete;

  const Shared& a() const noexcept { return a_; }
  const Shared& b() const noexcept { return b_; }
  const Shared& c() const noexcept { return c_; }
  bool consumed() const noexcept { return consumed_.load(); }

  /// Marks the triple used. Exactly one caller ever gets `true`.
  bool try_consume() noexcept { return !consumed_.exchange(true); }

 private:
  Shared a_, b_, c_;
  std::atomic<bool> consumed_{false};
};

inline BeaverTriple triple_gen(std::size_t n_parties, std::uint64_t q, std::uint64_t seed, std::size_t length = 1) {
  if (n_parties < 2) fail(ErrorCode::invalid_party_count, "triples need at least 2 parties");
  const kernels::ModulusContext m(q);
  Rng rng(seed);
  Vec a(length), b(length), c(length);
  for (std::size_t k = 0; k < length; ++k) {
    a[k] = rng.uniform(q);
    b[k] = rng.uniform(q);
    c[k] = m.mul(a[k], b[k]);
  }
  auto sa = detail::share_with(a, n_parties, m, rng);
  auto sb = detail::share_with(b, n_parties, m, rng);
  auto sc = detail::share_with(c, n_parties, m, rng);
  return BeaverTriple(std::move(sa), std::move(sb), std::move(sc));
}

/// Beaver multiplication. Parties open d = x - a and e = y - b, then
/// z_i = c_i + d*b_i + e*a_i, with party 0 also adding d*e.
inline Shared mpc_mul(const Shared& x, const Shared& y, BeaverTriple& triple, VectorOps& ops = host_ops()) {
  detail::check_compatible(x, y);
  detail::check_compatible(x, triple.a());
  detail::check_compatible(x, triple.b());
  detail::check_compatible(x, triple.c());
  if (!triple.try_consume()) fail(ErrorCode::triple_reuse, "Beaver triple already used");
  const kernels::ModulusContext m(x.modulus);
  Shared d_sh{x.modulus, {}}, e_sh{x.modulus, {}};
  for (std::size_t p = 0; p < x.parties(); ++p) {
    d_sh.shares.push_back({p, ops.sub(m, x.shares[p].value, triple.a().shares[p].value)});
    e_sh.shares.push_back({p, ops.sub(m, y.shares[p].value, triple.b().shares[p].value)});
  }
  const Vec d = reconstruct(d_sh, ops);
  const Vec e = reconstruct(e_sh, ops);
  Shared z{x.modulus, {}};
  for (std::size_t p = 0; p < x.parties(); ++p) {
    Vec zi = ops.add(m, triple.c().shares[p].value, ops.mul(m, d, triple.b().shares[p].value));
    zi = ops.add(m, zi, ops.mul(m, e, triple.a().shares[p].value));
    if (p == 0) zi = ops.add(m, zi, ops.mul(m, d, e));
    z.shares.push_back({x.shares[p].party_id, std::move(zi)});
  }
  return z;
}

}  // namespace ppim::protocols
