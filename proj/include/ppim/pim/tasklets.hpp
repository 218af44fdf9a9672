#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>

namespace ppim::pim {

struct IndexRange {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t size() const noexcept { return end - begin; }
};

/// Contiguous share of [0, n) owned by tasklet `tid` out of `n_tasklets`.
/// Shares differ in size by at most one; earlier tasklets take the extra.
constexpr IndexRange tasklet_range(std::size_t n, unsigned n_tasklets, unsigned tid) {
  const std::size_t base = n / n_tasklets;
  const std::size_t extra = n % n_tasklets;
  const std::size_t begin = tid * base + std::min<std::size_t>(tid, extra);
  return {begin, begin + base + (tid < extra ? 1 : 0)};
}

constexpr std::uint64_t ceil_div(std::uint64_t a, std::uint64_t b) { return (a + b - 1) / b; }

/// Runs `fn(tid, range)` for every tasklet in index order. Tasklets are
/// simulated one after another, so results never depend on scheduling.
template <class Fn>
void for_each_tasklet(std::size_t n, unsigned n_tasklets, Fn&& fn) {
  for (unsigned tid = 0; tid < n_tasklets; ++tid) fn(tid, tasklet_range(n, n_tasklets, tid));
}

}  // namespace ppim::pim
