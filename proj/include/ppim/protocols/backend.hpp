#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ppim/kernels/modarith.hpp"
#include "ppim/kernels/poly.hpp"
#include "ppim/kernels/vector_ops.hpp"

namespace ppim::protocols {

using Vec = std::vector<std::uint64_t>;

/// Where protocol arithmetic executes. The host implementation calls the
/// kernels directly; apps::PipelineOps sends the same work through the PIM
/// pipeline.
class VectorOps {
 public:
  virtual ~VectorOps() = default;
  virtual Vec add(const kernels::ModulusContext& m, std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) = 0;
  virtual Vec sub(const kernels::ModulusContext& m, std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) = 0;
  virtual Vec mul(const kernels::ModulusContext& m, std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) = 0;
  virtual kernels::Polynomial poly_mul(const kernels::Polynomial& a, const kernels::Polynomial& b) = 0;
};

class HostOps final : public VectorOps {
 public:
  Vec add(const kernels::ModulusContext& m, std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) override {
    return kernels::mod_vec_add(m, a, b);
  }
  Vec sub(const kernels::ModulusContext& m, std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) override {
    return kernels::mod_vec_sub(m, a, b);
  }
  Vec mul(const kernels::ModulusContext& m, std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) override {
    return kernels::mod_vec_mul(m, a, b);
  }
  kernels::Polynomial poly_mul(const kernels::Polynomial& a, const kernels::Polynomial& b) override {
    return kernels::poly_mul_ntt(a, b);
  }
};

inline VectorOps& host_ops() {
  static HostOps ops;
  return ops;
}

}  // namespace ppim::protocols
