#include <gtest/gtest.h>

#include "ppim/kernels/registry.hpp"
#include "ppim/protocols/rng.hpp"

using namespace ppim;
using namespace ppim::kernels;

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

}  // namespace

TEST(VectorOps, VecAdd) {
  const std::vector<std::uint32_t> a = {1, 2, 0xFFFFFFFFu}, b = {3, 4, 2};
  EXPECT_EQ(vec_add(a, b), (std::vector<std::uint32_t>{4, 6, 1}));
  EXPECT_TRUE(vec_add(std::vector<std::uint32_t>{}, std::vector<std::uint32_t>{}).empty());
  EXPECT_EQ(code_of([&] { vec_add(a, std::vector<std::uint32_t>{1}); }), ErrorCode::length_mismatch);
}

TEST(ModArith, Examples) {
  const ModulusContext m17(17);
  EXPECT_EQ(mod_mul(m17, 5, 7), 1u);
  EXPECT_EQ(mod_add(m17, 16, 1), 0u);
  EXPECT_EQ(mod_sub(m17, 0, 1), 16u);
  EXPECT_EQ(m17.inv(5), 7u);
  EXPECT_EQ(code_of([&] { mod_add(m17, 17, 0); }), ErrorCode::input_out_of_range);
  EXPECT_EQ(code_of([] { ModulusContext(15); }), ErrorCode::invalid_argument);
  const ModulusContext big(0xFFFFFFFFFFFFFFC5ull);  // largest 64-bit prime
  EXPECT_EQ(big.add(big.q() - 1, big.q() - 1), big.q() - 2);
  EXPECT_EQ(big.mul(big.q() - 1, big.q() - 1), 1u);
}

TEST(ModArith, Primality) {
  for (std::uint64_t p : {17ull, 97ull, 7681ull, 132120577ull, 2147483647ull}) EXPECT_TRUE(is_prime(p)) << p;
  for (std::uint64_t c : {0ull, 1ull, 561ull, 7680ull, 2147483649ull, 3215031751ull}) EXPECT_FALSE(is_prime(c)) << c;
}

TEST(ModArith, RandomAgainstWideArithmetic) {
  protocols::Rng rng(12);
  const std::uint64_t q = 2147483647;
  const ModulusContext m(q);
  for (int i = 0; i < 10000; ++i) {
    const std::uint64_t a = rng.uniform(q), b = rng.uniform(q);
    EXPECT_EQ(m.add(a, b), (a + b) % q);
    EXPECT_EQ(m.sub(a, b), (a + q - b) % q);
    EXPECT_EQ(m.mul(a, b), (a * b) % q);
  }
}

TEST(VectorOps, DotProduct) {
  const ModulusContext m(97);
  const std::vector<std::uint64_t> a = {1, 2, 3}, b = {4, 5, 6};
  EXPECT_EQ(dot_product<std::uint64_t>(m, a, b), 32u);
  const std::vector<std::uint64_t> c = {96, 96};
  EXPECT_EQ(dot_product<std::uint64_t>(m, c, c), 2u);
  EXPECT_EQ(code_of([&] { dot_product<std::uint64_t>(m, a, c); }), ErrorCode::mismatch);
}

TEST(Registry, Ids) {
  std::vector<std::string> ids;
  for (const auto& [id, spec] : kernel_registry()) ids.push_back(id);
  EXPECT_EQ(ids, (std::vector<std::string>{"dot", "identity", "mod_add", "mod_mul", "mod_sub", "ntt", "poly_mul",
                                           "vec_add"}));
  EXPECT_EQ(find_kernel("dot").aggregation, Aggregation::sum_mod);
  EXPECT_EQ(find_kernel("poly_mul").arity, 2u);
  EXPECT_EQ(code_of([] { find_kernel("conv2d"); }), ErrorCode::unknown_kernel);
}

TEST(Registry, ParamValidation) {
  EXPECT_EQ(code_of([] { find_kernel("dot").validate({0, 0}); }), ErrorCode::config_invalid);
  EXPECT_EQ(code_of([] { find_kernel("dot").validate({100, 0}); }), ErrorCode::config_invalid);
  EXPECT_EQ(code_of([] { find_kernel("ntt").validate({7681, 100}); }), ErrorCode::config_invalid);
  EXPECT_EQ(code_of([] { find_kernel("ntt").validate({7681, 1024}); }), ErrorCode::config_invalid);
  EXPECT_NO_THROW(find_kernel("ntt").validate({7681, 256}));
  EXPECT_EQ(find_kernel("poly_mul").granule({7681, 256}), 256u);
}

TEST(Registry, TaskletInvariance) {
  protocols::Rng rng(13);
  const std::uint64_t q = 7681;
  std::vector<std::uint32_t> a(512), b(512);
  for (auto& x : a) x = static_cast<std::uint32_t>(rng.uniform(q));
  for (auto& x : b) x = static_cast<std::uint32_t>(rng.uniform(q));
  const std::span<const std::uint32_t> two[] = {a, b};
  const KernelParams params{q, 256};
  for (const auto& [id, spec] : kernel_registry()) {
    const auto inputs = std::span(two).first(spec.arity);
    const auto ref = spec.run(inputs, params, 1);
    for (unsigned t : {2u, 7u, 16u, 24u}) {
      const auto out = spec.run(inputs, params, t);
      EXPECT_EQ(out.values, ref.values) << id << " T=" << t;
      EXPECT_EQ(out.work, ref.work) << id;
    }
  }
}

TEST(Registry, StageCounts) {
  std::vector<std::uint32_t> a(100, 1), b(100, 2);
  const std::span<const std::uint32_t> in[] = {a, b};
  EXPECT_EQ(find_kernel("vec_add").run(in, {}, 8).stages, std::vector<std::uint64_t>{13});
  EXPECT_EQ(find_kernel("dot").run(in, {97, 0}, 8).stages, (std::vector<std::uint64_t>{13, 8}));
  EXPECT_EQ(find_kernel("dot").run(in, {97, 0}, 8).values, std::vector<std::uint32_t>{200 % 97});
  EXPECT_EQ(code_of([&] {
              std::vector<std::uint32_t> big(100, 97);
              const std::span<const std::uint32_t> bad[] = {big, b};
              find_kernel("mod_add").run(bad, {97, 0}, 1);
            }),
            ErrorCode::input_out_of_range);
}
