#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ppim/error.hpp"
#include "ppim/orchestrate/pipeline.hpp"
#include "ppim/protocols/backend.hpp"

namespace ppim::apps {

/// Runs protocol arithmetic as pipeline jobs on a simulated PIM system and
/// accumulates the modeled timeline of every job.
class PipelineOps final : public protocols::VectorOps {
 public:
  PipelineOps(pim::PimSystem& system, orchestrate::OrchestrationConfig cfg) : system_(system), cfg_(cfg) {}

  protocols::Vec add(const kernels::ModulusContext& m, std::span<const std::uint64_t> a,
                     std::span<const std::uint64_t> b) override {
    return binary("mod_add", m.q(), a, b);
  }
  protocols::Vec sub(const kernels::ModulusContext& m, std::span<const std::uint64_t> a,
                     std::span<const std::uint64_t> b) override {
    return binary("mod_sub", m.q(), a, b);
  }
  protocols::Vec mul(const kernels::ModulusContext& m, std::span<const std::uint64_t> a,
                     std::span<const std::uint64_t> b) override {
    return binary("mod_mul", m.q(), a, b);
  }
  kernels::Polynomial poly_mul(const kernels::Polynomial& a, const kernels::Polynomial& b) override {
    kernels::detail::require_same_ring(a, b);
    auto out = binary("poly_mul", a.ring().q(), a.coeffs(), b.coeffs(), a.ring().n());
    return kernels::Polynomial(a.ring_ptr(), std::move(out));
  }

  const pim::Timeline& timeline() const noexcept { return timeline_; }
  std::size_t jobs() const noexcept { return jobs_; }

 private:
  static std::vector<std::uint32_t> narrow(std::span<const std::uint64_t> v) {
    std::vector<std::uint32_t> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (v[i] > 0xFFFFFFFFull) fail(ErrorCode::input_out_of_range, "pipeline elements are 32-bit");
      out[i] = static_cast<std::uint32_t>(v[i]);
    }
    return out;
  }

  protocols::Vec binary(const std::string& kernel, std::uint64_t q, std::span<const std::uint64_t> a,
                        std::span<const std::uint64_t> b, std::size_t degree = 0) {
    if (a.size() != b.size()) fail(ErrorCode::mismatch, "vector lengths differ");
    const auto a32 = narrow(a);
    const auto b32 = narrow(b);
    const std::span<const std::uint32_t> inputs[] = {a32, b32};
    auto cfg = cfg_;
    // Tiny jobs would leave most DPUs idle with empty chunks.
    cfg.n_dpus = std::max<std::size_t>(1, std::min(cfg.n_dpus, degree ? a.size() / degree : a.size()));
    auto job = orchestrate::run_pipeline(system_, cfg, kernel, {q, degree}, inputs);
    timeline_.append(job.timeline);
    ++jobs_;
    return protocols::Vec(job.output.begin(), job.output.end());
  }

  pim::PimSystem& system_;
  orchestrate::OrchestrationConfig cfg_;
  pim::Timeline timeline_;
  std::size_t jobs_ = 0;
};

}  // namespace ppim::apps
