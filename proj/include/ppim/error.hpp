#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ppim {

enum class ErrorCode {
  invalid_argument,
  capacity_exceeded,
  unknown_dpu,
  out_of_range,
  tasklet_limit_exceeded,
  wram_exceeded,
  missing_input,
  empty_timeline,
  malformed_input,
  malformed_chunk,
  dangling_ref,
  length_mismatch,
  input_out_of_range,
  wrong_length,
  unreduced_input,
  ring_mismatch,
  invalid_party_count,
  missing_share,
  mismatch,
  triple_reuse,
  plaintext_out_of_range,
  noise_overflow,
  params_mismatch,
  unknown_kernel,
  config_invalid,
  io_error,
  internal,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid-argument";
    case ErrorCode::capacity_exceeded: return "capacity-exceeded";
    case ErrorCode::unknown_dpu: return "unknown-dpu";
    case ErrorCode::out_of_range: return "out-of-range";
    case ErrorCode::tasklet_limit_exceeded: return "tasklet-limit-exceeded";
    case ErrorCode::wram_exceeded: return "wram-exceeded";
    case ErrorCode::missing_input: return "missing-input";
    case ErrorCode::empty_timeline: return "empty-timeline";
    case ErrorCode::malformed_input: return "malformed-input";
    case ErrorCode::malformed_chunk: return "malformed-chunk";
    case ErrorCode::dangling_ref: return "dangling-ref";
    case ErrorCode::length_mismatch: return "length-mismatch";
    case ErrorCode::input_out_of_range: return "input-out-of-range";
    case ErrorCode::wrong_length: return "wrong-length";
    case ErrorCode::unreduced_input: return "unreduced-input";
    case ErrorCode::ring_mismatch: return "ring-mismatch";
    case ErrorCode::invalid_party_count: return "invalid-party-count";
    case ErrorCode::missing_share: return "missing-share";
    case ErrorCode::mismatch: return "mismatch";
    case ErrorCode::triple_reuse: return "triple-reuse";
    case ErrorCode::plaintext_out_of_range: return "plaintext-out-of-range";
    case ErrorCode::noise_overflow: return "noise-overflow";
    case ErrorCode::params_mismatch: return "params-mismatch";
    case ErrorCode::unknown_kernel: return "unknown-kernel";
    case ErrorCode::config_invalid: return "config-invalid";
    case ErrorCode::io_error: return "io-error";
    case ErrorCode::internal: return "internal";
  }
  return "unknown";
}

/// Every failure in the library is reported as an Error carrying a
/// machine-checkable code; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace ppim
