#include <gtest/gtest.h>

#include "ppim/compress/dedup.hpp"
#include "ppim/protocols/rng.hpp"

using namespace ppim;
using namespace ppim::compress;

TEST(Dedup, AllZeros) {
  const std::vector<std::uint32_t> v(1024, 0);
  const auto idx = dedup_encode(v, 64);
  EXPECT_EQ(idx.unique_blocks.size(), 1u);
  EXPECT_EQ(idx.refs.size(), 16u);
  EXPECT_TRUE(idx.tail.empty());
  EXPECT_EQ(dedup_decode(idx), v);
}

TEST(Dedup, AllDistinct) {
  std::vector<std::uint32_t> v(100);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<std::uint32_t>(i);
  const auto idx = dedup_encode(v, 8);
  EXPECT_EQ(idx.unique_blocks.size(), 12u);
  EXPECT_EQ(idx.tail.size(), 4u);
  EXPECT_EQ(dedup_decode(idx), v);
}

TEST(Dedup, RepeatedPattern) {
  std::vector<std::uint32_t> pattern = {9, 8, 7, 6, 5, 4, 3, 2};
  std::vector<std::uint32_t> v;
  for (int i = 0; i < 8; ++i) v.insert(v.end(), pattern.begin(), pattern.end());
  const auto idx = dedup_encode(v, 8);
  EXPECT_EQ(idx.unique_blocks.size(), 1u);
  EXPECT_EQ(idx.refs, std::vector<std::uint32_t>(8, 0));
  std::vector<std::uint8_t> bytes;
  dedup_serialize(idx, bytes);
  EXPECT_LT(bytes.size(), v.size());
  EXPECT_EQ(dedup_decode(dedup_deserialize(bytes)), v);
}

TEST(Dedup, Empty) {
  const auto idx = dedup_encode(std::vector<std::uint32_t>{}, 4);
  EXPECT_TRUE(idx.unique_blocks.empty());
  EXPECT_TRUE(dedup_decode(idx).empty());
  std::vector<std::uint8_t> bytes;
  dedup_serialize(idx, bytes);
  EXPECT_EQ(dedup_deserialize(bytes), idx);
}

TEST(Dedup, Errors) {
  DedupIndex idx;
  idx.block_size = 2;
  idx.unique_blocks = {{1, 2}};
  idx.refs = {0, 1};
  try {
    dedup_decode(idx);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::dangling_ref);
  }
  try {
    dedup_encode(std::vector<std::uint32_t>{1}, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::invalid_argument);
  }
  try {
    dedup_deserialize(std::vector<std::uint8_t>{4, 1, 1, 0, 0, 1, 2});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::malformed_input);
  }
}

TEST(Dedup, HashCollisionsResolvedByContent) {
  // Many short blocks force bucket sharing; content comparison keeps them apart.
  protocols::Rng rng(8);
  std::vector<std::uint32_t> v(20000);
  for (auto& x : v) x = static_cast<std::uint32_t>(rng.uniform(3));
  for (std::size_t unit : {1u, 2u, 3u, 5u}) {
    const auto idx = dedup_encode(v, unit);
    EXPECT_EQ(dedup_decode(idx), v);
    for (std::size_t i = 0; i < idx.unique_blocks.size(); ++i)
      for (std::size_t j = i + 1; j < idx.unique_blocks.size(); ++j) ASSERT_NE(idx.unique_blocks[i], idx.unique_blocks[j]);
  }
}

TEST(Dedup, RandomRoundtrips) {
  protocols::Rng rng(21);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<std::uint32_t> v(rng.uniform(500));
    const std::uint64_t range = 1 + rng.uniform(1000);
    for (auto& x : v) x = static_cast<std::uint32_t>(rng.uniform(range));
    const auto idx = dedup_encode(v, 1 + rng.uniform(40));
    std::vector<std::uint8_t> bytes;
    dedup_serialize(idx, bytes);
    ASSERT_EQ(dedup_decode(dedup_deserialize(bytes)), v);
  }
}
