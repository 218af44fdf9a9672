#include <gtest/gtest.h>

#include "ppim/protocols/bfv.hpp"

using namespace ppim;
using namespace ppim::protocols;

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

Plaintext random_plain(const BfvParams& p, Rng& rng) {
  Plaintext m(p.n());
  for (auto& c : m) c = rng.uniform(p.t);
  return m;
}

}  // namespace

TEST(Bfv, ShippedParameters) {
  const auto p = shipped_bfv_params();
  EXPECT_EQ(p.n(), 1024u);
  EXPECT_EQ(p.q(), 132120577u);
  EXPECT_EQ(p.delta(), 7771798u);
  EXPECT_EQ(p.q_mod_t(), 11u);
  EXPECT_EQ(p.max_fresh_additions(), 228582u);
  const std::uint64_t k = p.max_fresh_additions();
  EXPECT_TRUE(p.decryptable(k * 6 + (k - 1) * 11));
  EXPECT_FALSE(p.decryptable((k + 1) * 6 + k * 11));
}

TEST(Bfv, Roundtrip) {
  const auto p = shipped_bfv_params();
  Rng rng(1);
  const auto sk = bfv_keygen(p, 2);
  for (int i = 0; i < 20; ++i) {
    const auto m = random_plain(p, rng);
    EXPECT_EQ(bfv_decrypt(p, sk, bfv_encrypt(p, sk, m, rng.next())), m);
  }
  const Plaintext zero(p.n(), 0);
  EXPECT_EQ(bfv_decrypt(p, sk, bfv_encrypt(p, sk, zero, 3)), zero);
}

TEST(Bfv, EncryptionIsRandomized) {
  const auto p = shipped_bfv_params();
  const auto sk = bfv_keygen(p, 1);
  const auto m = constant_plaintext(p, 5);
  const auto a = bfv_encrypt(p, sk, m, 10), b = bfv_encrypt(p, sk, m, 11);
  EXPECT_FALSE(a.c0 == b.c0);
  EXPECT_FALSE(a.c1 == b.c1);
  EXPECT_EQ(bfv_decrypt(p, sk, a), bfv_decrypt(p, sk, b));
}

TEST(Bfv, Add) {
  const auto p = shipped_bfv_params();
  const auto sk = bfv_keygen(p, 1);
  const auto c3 = bfv_encrypt(p, sk, constant_plaintext(p, 3), 4);
  const auto c5 = bfv_encrypt(p, sk, constant_plaintext(p, 5), 5);
  EXPECT_EQ(bfv_decrypt(p, sk, bfv_add(c3, c5))[0], 8u);
  const auto c0 = bfv_encrypt(p, sk, constant_plaintext(p, 0), 6);
  EXPECT_EQ(bfv_decrypt(p, sk, bfv_add(c3, c0)), constant_plaintext(p, 3));
  const auto c16 = bfv_encrypt(p, sk, constant_plaintext(p, 16), 7);
  EXPECT_EQ(bfv_decrypt(p, sk, bfv_add(c16, c5))[0], 4u);  // wraps mod t
  EXPECT_EQ(bfv_add(c3, c5).noise_bound, 6u + 6u + 11u);
}

TEST(Bfv, MulPlain) {
  const auto p = shipped_bfv_params();
  Rng rng(8);
  const auto sk = bfv_keygen(p, 1);
  const auto m = random_plain(p, rng);
  const auto ct = bfv_encrypt(p, sk, m, 9);
  EXPECT_EQ(bfv_decrypt(p, sk, bfv_mul_plain(ct, constant_plaintext(p, 1))), m);
  const auto tripled = bfv_decrypt(p, sk, bfv_mul_plain(ct, constant_plaintext(p, 3)));
  for (std::size_t i = 0; i < m.size(); ++i) ASSERT_EQ(tripled[i], 3 * m[i] % p.t);
  // Multiplying by x rotates negacyclically: the top coefficient wraps negated.
  Plaintext x(p.n(), 0);
  x[1] = 1;
  const auto shifted = bfv_decrypt(p, sk, bfv_mul_plain(ct, x));
  EXPECT_EQ(shifted[0], (p.t - m[p.n() - 1]) % p.t);
  for (std::size_t i = 1; i < m.size(); ++i) ASSERT_EQ(shifted[i], m[i - 1]);
}

TEST(Bfv, Errors) {
  const auto p = shipped_bfv_params();
  const auto sk = bfv_keygen(p, 1);
  EXPECT_EQ(code_of([&] { bfv_encrypt(p, sk, constant_plaintext(p, 17), 1); }), ErrorCode::plaintext_out_of_range);
  EXPECT_EQ(code_of([&] { bfv_encrypt(p, sk, Plaintext(5, 0), 1); }), ErrorCode::wrong_length);
  const auto other = make_bfv_params(1024, 132120577, 5, 6);
  const auto a = bfv_encrypt(p, sk, constant_plaintext(p, 1), 1);
  const auto b = bfv_encrypt(other, sk, constant_plaintext(other, 1), 1);
  EXPECT_EQ(code_of([&] { bfv_add(a, b); }), ErrorCode::params_mismatch);
  EXPECT_EQ(code_of([&] { bfv_decrypt(other, sk, a); }), ErrorCode::params_mismatch);
  EXPECT_EQ(code_of([] { make_bfv_params(256, 7681, 17, 1000); }), ErrorCode::invalid_argument);
  EXPECT_EQ(code_of([] { make_bfv_params(256, 7681, 1, 1); }), ErrorCode::invalid_argument);
}

TEST(Bfv, NoiseOverflowSignaled) {
  // Small q: the budget runs out after a couple of additions.
  const auto p = make_bfv_params(256, 7681, 17, 50);
  const auto sk = bfv_keygen(p, 1);
  auto ct = bfv_encrypt(p, sk, constant_plaintext(p, 1), 2);
  ct = bfv_add(ct, ct);
  EXPECT_EQ(bfv_decrypt(p, sk, ct)[0], 2u);
  EXPECT_EQ(code_of([&] { bfv_add(ct, ct); }), ErrorCode::noise_overflow);
  Plaintext big(p.n(), 0);
  big[0] = 16;
  EXPECT_EQ(code_of([&] { bfv_mul_plain(ct, big); }), ErrorCode::noise_overflow);
}

TEST(Bfv, TamperedCiphertextDetected) {
  const auto p = shipped_bfv_params();
  const auto sk = bfv_keygen(p, 1);
  const auto ct = bfv_encrypt(p, sk, constant_plaintext(p, 4), 2);
  std::vector<std::uint64_t> c0(ct.c0.coeffs().begin(), ct.c0.coeffs().end());
  c0[7] = (c0[7] + p.delta() / 3) % p.q();
  BfvCiphertext bad{p, kernels::Polynomial(p.ring, c0), ct.c1, ct.noise_bound};
  EXPECT_EQ(code_of([&] { bfv_decrypt(p, sk, bad); }), ErrorCode::noise_overflow);
  bad = ct;
  bad.noise_bound = p.delta();
  EXPECT_EQ(code_of([&] { bfv_decrypt(p, sk, bad); }), ErrorCode::noise_overflow);
}

TEST(Bfv, ManyAdditionsWithinBudget) {
  const auto p = shipped_bfv_params();
  const auto sk = bfv_keygen(p, 1);
  Rng rng(3);
  std::uint64_t expect = 0;
  auto acc = bfv_encrypt(p, sk, constant_plaintext(p, 0), rng.next());
  for (int i = 0; i < 300; ++i) {
    const std::uint64_t v = rng.uniform(p.t);
    expect = (expect + v) % p.t;
    acc = bfv_add(acc, bfv_encrypt(p, sk, constant_plaintext(p, v), rng.next()));
  }
  EXPECT_EQ(bfv_decrypt(p, sk, acc)[0], expect);
}
