#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ppim/error.hpp"
#include "ppim/kernels/modarith.hpp"

namespace ppim::kernels {

namespace detail {
inline void require_same_length(std::size_t a, std::size_t b) {
  if (a != b) fail(ErrorCode::length_mismatch, "lengths " + std::to_string(a) + " and " + std::to_string(b));
}
}  // namespace detail

/// Element-wise sum modulo 2^32.
inline std::vector<std::uint32_t> vec_add(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b) {
  detail::require_same_length(a.size(), b.size());
  std::vector<std::uint32_t> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

template <class T>
void check_reduced(const ModulusContext& ctx, std::span<const T> v) {
  for (auto x : v) ctx.check(x);
}

/// Sum of a[i] * b[i] mod q.
template <class T>
std::uint64_t dot_product(const ModulusContext& ctx, std::span<const T> a, std::span<const T> b) {
  if (a.size() != b.size()) fail(ErrorCode::mismatch, "dot product of different lengths");
  check_reduced(ctx, a);
  check_reduced(ctx, b);
  std::uint64_t acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) acc = ctx.add(acc, ctx.mul(a[i], b[i]));
  return acc;
}

inline std::vector<std::uint64_t> mod_vec_add(const ModulusContext& ctx, std::span<const std::uint64_t> a,
                                              std::span<const std::uint64_t> b) {
  if (a.size() != b.size()) fail(ErrorCode::mismatch, "vector lengths differ");
  check_reduced(ctx, a);
  check_reduced(ctx, b);
  std::vector<std::uint64_t> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = ctx.add(a[i], b[i]);
  return out;
}

inline std::vector<std::uint64_t> mod_vec_sub(const ModulusContext& ctx, std::span<const std::uint64_t> a,
                                              std::span<const std::uint64_t> b) {
  if (a.size() != b.size()) fail(ErrorCode::mismatch, "vector lengths differ");
  check_reduced(ctx, a);
  check_reduced(ctx, b);
  std::vector<std::uint64_t> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = ctx.sub(a[i], b[i]);
  return out;
}

inline std::vector<std::uint64_t> mod_vec_mul(const ModulusContext& ctx, std::span<const std::uint64_t> a,
                                              std::span<const std::uint64_t> b) {
  if (a.size() != b.size()) fail(ErrorCode::mismatch, "vector lengths differ");
  check_reduced(ctx, a);
  check_reduced(ctx, b);
  std::vector<std::uint64_t> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = ctx.mul(a[i], b[i]);
  return out;
}

}  // namespace ppim::kernels
