#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ppim/error.hpp"

namespace ppim::pim {

enum class Phase { host_compress, host_to_dpu, dpu_compute, dpu_to_host, host_decompress, host_compute };

inline constexpr std::array<Phase, 6> kAllPhases = {Phase::host_compress, Phase::host_to_dpu,   Phase::dpu_compute,
                                                    Phase::dpu_to_host,   Phase::host_decompress, Phase::host_compute};

constexpr std::string_view to_string(Phase p) {
  switch (p) {
    case Phase::host_to_dpu: return "host_to_dpu";
    case Phase::dpu_compute: return "dpu_compute";
    case Phase::dpu_to_host: return "dpu_to_host";
    case Phase::host_compute: return "host_compute";
    case Phase::host_compress: return "host_compress";
    case Phase::host_decompress: return "host_decompress";
  }
  return "?";
}

inline constexpr int kHost = -1;

struct PhaseRecord {
  Phase phase = Phase::host_compute;
  int dpu_id = kHost;        // owning DPU, or kHost for host-wide work
  std::uint64_t bytes = 0;   // bytes moved (transfers) or produced (codecs)
  std::uint64_t elements = 0;
  double duration = 0.0;     // modeled seconds
  std::string step;          // finer label, e.g. "decompress" inside dpu_compute
  std::size_t group = 0;     // records sharing a group run concurrently

  bool operator==(const PhaseRecord&) const = default;
};

/// Ordered phase records. Groups execute one after another; records within a
/// group overlap, so a group costs the max of its members' durations.
class Timeline {
 public:
  /// Appends `rec` as its own sequential group.
  void add_sequential(PhaseRecord rec) {
    rec.group = next_group_++;
    records_.push_back(std::move(rec));
  }

  /// Appends `recs` as one concurrent group.
  void add_parallel(std::span<const PhaseRecord> recs) {
    if (recs.empty()) return;
    const std::size_t g = next_group_++;
    for (PhaseRecord r : recs) {
      r.group = g;
      records_.push_back(std::move(r));
    }
  }

  void append(const Timeline& other) {
    std::map<std::size_t, std::size_t> remap;
    for (PhaseRecord r : other.records_) {
      auto [it, inserted] = remap.try_emplace(r.group, next_group_);
      if (inserted) ++next_group_;
      r.group = it->second;
      records_.push_back(std::move(r));
    }
  }

  const std::vector<PhaseRecord>& records() const noexcept { return records_; }
  bool empty() const noexcept { return records_.empty(); }

  /// Cost of each group in order: (dominant phase, max duration).
  std::vector<std::pair<Phase, double>> group_costs() const {
    std::map<std::size_t, std::pair<Phase, double>> by_group;
    for (const auto& r : records_) {
      auto [it, inserted] = by_group.try_emplace(r.group, r.phase, r.duration);
      if (!inserted && r.duration > it->second.second) it->second = {r.phase, r.duration};
    }
    std::vector<std::pair<Phase, double>> out;
    out.reserve(by_group.size());
    for (const auto& [g, cost] : by_group) out.push_back(cost);
    return out;
  }

  double total() const {
    double sum = 0.0;
    for (const auto& [phase, d] : group_costs()) sum += d;
    return sum;
  }

  /// Contribution of each phase label to total().
  std::map<Phase, double> phase_totals() const {
    std::map<Phase, double> out;
    for (const auto& r : records_) out.try_emplace(r.phase, 0.0);
    for (const auto& [phase, d] : group_costs()) out[phase] += d;
    return out;
  }

  std::uint64_t phase_bytes(Phase p) const {
    std::uint64_t sum = 0;
    for (const auto& r : records_)
      if (r.phase == p) sum += r.bytes;
    return sum;
  }

  /// CSV export, one row per record: phase,dpu_id,bytes,duration_s.
  void write_csv(std::ostream& os) const {
    os << "phase,dpu_id,bytes,duration_s\n";
    for (const auto& r : records_) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.17g", r.duration);
      os << to_string(r.phase) << ',' << r.dpu_id << ',' << r.bytes << ',' << buf << '\n';
    }
  }

 private:
  std::vector<PhaseRecord> records_;
  std::size_t next_group_ = 0;
};

/// Fraction of total modeled time spent in each phase label. A timeline whose
/// durations are all zero splits evenly across the labels it contains.
inline std::map<Phase, double> phase_breakdown(const Timeline& timeline) {
  if (timeline.empty()) fail(ErrorCode::empty_timeline, "phase_breakdown needs at least one record");
  auto totals = timeline.phase_totals();
  double sum = 0.0;
  for (const auto& [p, d] : totals) sum += d;
  for (auto& [p, d] : totals) d = sum > 0.0 ? d / sum : 1.0 / static_cast<double>(totals.size());
  return totals;
}

}  // namespace ppim::pim
