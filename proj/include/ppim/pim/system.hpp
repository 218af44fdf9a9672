#pragma once

#include <cstdint>
#include <cstring>
#include <functional>
#include <iterator>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ppim/error.hpp"
#include "ppim/pim/cost_model.hpp"
#include "ppim/pim/tasklets.hpp"
#include "ppim/pim/timeline.hpp"

namespace ppim::pim {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

/// One UPMEM-style DPU: a 64 MiB MRAM bank, 64 KiB of WRAM and up to
/// 24 hardware threads (tasklets).
struct DpuSpec {
  std::uint64_t mram_bytes = 64ull << 20;
  std::uint64_t wram_bytes = 64ull << 10;
  unsigned max_tasklets = 24;

  void validate() const {
    if (mram_bytes == 0) fail(ErrorCode::invalid_argument, "mram_bytes must be positive");
    if (wram_bytes == 0) fail(ErrorCode::invalid_argument, "wram_bytes must be positive");
    if (max_tasklets == 0) fail(ErrorCode::invalid_argument, "max_tasklets must be at least 1");
  }
};

struct MramRegion {
  std::uint64_t offset = 0;
  std::uint64_t length = 0;
  bool operator==(const MramRegion&) const = default;
};

/// What a kernel body hands back to the simulator.
struct KernelWork {
  Bytes output;
  /// Per synchronisation stage, the element count processed by the busiest
  /// tasklet. Stages are separated by barriers and therefore serialise.
  std::vector<std::uint64_t> stage_critical_elements;
};

/// A kernel bound to its arguments, ready to launch on a DPU.
struct DpuKernel {
  std::string name;
  double cost_factor = 1.0;
  std::uint64_t wram_shared_bytes = 0;
  std::uint64_t wram_per_tasklet_bytes = 0;
  std::function<KernelWork(std::span<const ByteView> inputs, unsigned n_tasklets)> body;
};

struct CopyResult {
  MramRegion region;
  PhaseRecord record;
};

struct ReadResult {
  Bytes data;
  PhaseRecord record;
};

struct LaunchResult {
  MramRegion output;
  PhaseRecord record;
};

class Dpu {
 public:
  Dpu(int id, DpuSpec spec) : id_(id), spec_(spec) {}

  int id() const noexcept { return id_; }
  const DpuSpec& spec() const noexcept { return spec_; }
  std::uint64_t used_bytes() const noexcept { return used_; }
  std::uint64_t free_bytes() const noexcept { return spec_.mram_bytes - used_; }
  std::size_t allocation_count() const noexcept { return allocs_.size(); }

  /// First-fit placement of `data` in MRAM.
  MramRegion store(Bytes data) {
    const std::uint64_t len = data.size();
    if (len > free_bytes())
      fail(ErrorCode::capacity_exceeded, "DPU " + std::to_string(id_) + ": " + std::to_string(len) +
                                             " bytes requested, " + std::to_string(free_bytes()) + " free");
    if (len == 0) return {0, 0};
    std::uint64_t cursor = 0;
    for (const auto& [off, buf] : allocs_) {
      if (off - cursor >= len) break;
      cursor = off + buf.size();
    }
    if (spec_.mram_bytes - cursor < len)
      fail(ErrorCode::capacity_exceeded, "DPU " + std::to_string(id_) + ": MRAM too fragmented for " +
                                             std::to_string(len) + " bytes");
    used_ += len;
    allocs_.emplace(cursor, std::move(data));
    return {cursor, len};
  }

  ByteView view(MramRegion region, ErrorCode missing) const {
    if (region.length == 0) {
      if (region.offset > spec_.mram_bytes) fail(missing, "region offset beyond MRAM");
      return {};
    }
    auto it = allocs_.upper_bound(region.offset);
    if (it == allocs_.begin()) fail(missing, describe(region) + " not resident");
    --it;
    const std::uint64_t start = it->first;
    const std::uint64_t end = start + it->second.size();
    if (region.offset + region.length > end) fail(missing, describe(region) + " not resident");
    return ByteView(it->second).subspan(region.offset - start, region.length);
  }

  void release(MramRegion region) {
    if (region.length == 0) return;
    const auto it = allocs_.find(region.offset);
    if (it == allocs_.end() || it->second.size() != region.length)
      fail(ErrorCode::out_of_range, describe(region) + " is not a live allocation");
    used_ -= region.length;
    allocs_.erase(it);
  }

  void clear() {
    allocs_.clear();
    used_ = 0;
  }

 private:
  std::string describe(MramRegion r) const {
    return "DPU " + std::to_string(id_) + " region [" + std::to_string(r.offset) + ", +" + std::to_string(r.length) + ")";
  }

  int id_;
  DpuSpec spec_;
  std::map<std::uint64_t, Bytes> allocs_;
  std::uint64_t used_ = 0;
};

/// Host plus a fleet of DPUs with private address spaces. Data only crosses
/// between them through explicit copies, each priced by the cost model.
///
/// Not thread-safe: one owner at a time.
class PimSystem {
 public:
  PimSystem(std::size_t n_dpus, DpuSpec spec, CostModel cost) : spec_(spec), cost_(cost) {
    if (n_dpus == 0) fail(ErrorCode::invalid_argument, "a PIM system needs at least one DPU");
    spec.validate();
    cost.validate();
    dpus_.reserve(n_dpus);
    for (std::size_t i = 0; i < n_dpus; ++i) dpus_.emplace_back(static_cast<int>(i), spec);
  }

  std::size_t size() const noexcept { return dpus_.size(); }
  const DpuSpec& spec() const noexcept { return spec_; }
  const CostModel& cost() const noexcept { return cost_; }
  std::uint64_t total_mram_bytes() const noexcept { return spec_.mram_bytes * dpus_.size(); }

  const Dpu& dpu(std::size_t id) const { return dpus_.at(check(id)); }

  double host_to_dpu_time(std::uint64_t bytes) const {
    return cost_.transfer_latency + static_cast<double>(bytes) / cost_.host_to_dpu_bw;
  }
  double dpu_to_host_time(std::uint64_t bytes) const {
    return cost_.transfer_latency + static_cast<double>(bytes) / cost_.dpu_to_host_bw;
  }

  CopyResult copy_to_dpu(std::size_t dpu_id, ByteView buffer) {
    Dpu& d = dpus_[check(dpu_id)];
    const std::uint64_t len = buffer.size();
    MramRegion region = d.store(Bytes(buffer.begin(), buffer.end()));
    PhaseRecord rec{Phase::host_to_dpu, d.id(), len, 0, host_to_dpu_time(len), "copy", 0};
    return {region, std::move(rec)};
  }

  ReadResult copy_from_dpu(std::size_t dpu_id, MramRegion region) const {
    const Dpu& d = dpus_[check(dpu_id)];
    const ByteView src = d.view(region, ErrorCode::out_of_range);
    PhaseRecord rec{Phase::dpu_to_host, d.id(), region.length, 0, dpu_to_host_time(region.length), "copy", 0};
    return {Bytes(src.begin(), src.end()), std::move(rec)};
  }

  void free(std::size_t dpu_id, MramRegion region) { dpus_[check(dpu_id)].release(region); }
  void reset(std::size_t dpu_id) { dpus_[check(dpu_id)].clear(); }
  void reset_all() {
    for (auto& d : dpus_) d.clear();
  }

  /// Runs `kernel` on one DPU with `n_tasklets` threads. Inputs are read from
  /// MRAM and the output is written back to a fresh MRAM region.
  LaunchResult launch_kernel(std::size_t dpu_id, const DpuKernel& kernel, std::span<const MramRegion> inputs,
                             unsigned n_tasklets) {
    Dpu& d = dpus_[check(dpu_id)];
    if (n_tasklets < 1 || n_tasklets > spec_.max_tasklets)
      fail(ErrorCode::tasklet_limit_exceeded, std::to_string(n_tasklets) + " tasklets requested, limit is " +
                                                  std::to_string(spec_.max_tasklets));
    const std::uint64_t wram_need = kernel.wram_shared_bytes + kernel.wram_per_tasklet_bytes * n_tasklets;
    if (wram_need > spec_.wram_bytes)
      fail(ErrorCode::wram_exceeded, kernel.name + " needs " + std::to_string(wram_need) + " WRAM bytes with " +
                                         std::to_string(n_tasklets) + " tasklets");
    std::vector<ByteView> views;
    views.reserve(inputs.size());
    for (const auto& r : inputs) views.push_back(d.view(r, ErrorCode::missing_input));

    KernelWork work = kernel.body(views, n_tasklets);
    std::uint64_t critical = 0;
    for (auto s : work.stage_critical_elements) critical += s;
    const std::uint64_t produced = work.output.size();
    MramRegion out = d.store(std::move(work.output));
    PhaseRecord rec{Phase::dpu_compute, d.id(), produced, critical,
                    static_cast<double>(critical) * cost_.dpu_op_time * kernel.cost_factor, kernel.name, 0};
    return {out, std::move(rec)};
  }

 private:
  std::size_t check(std::size_t id) const {
    if (id >= dpus_.size())
      fail(ErrorCode::unknown_dpu, "DPU " + std::to_string(id) + " does not exist (system has " +
                                       std::to_string(dpus_.size()) + ")");
    return id;
  }

  DpuSpec spec_;
  CostModel cost_;
  std::vector<Dpu> dpus_;
};

inline PimSystem create_system(std::size_t n_dpus, DpuSpec spec = {}, CostModel cost = {}) {
  return PimSystem(n_dpus, spec, cost);
}

}  // namespace ppim::pim
