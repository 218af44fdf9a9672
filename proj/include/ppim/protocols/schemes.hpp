#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace ppim::protocols {

enum class SchemeFamily { secret_sharing, homomorphic };

struct SchemeInfo {
  std::string id;
  SchemeFamily family;
  std::string operations;
};

/// Protocols available to applications. New schemes (BGV, garbled circuits)
/// register here alongside the existing two.
inline const std::vector<SchemeInfo>& scheme_registry() {
  static const std::vector<SchemeInfo> schemes = {
      {"additive-ss", SchemeFamily::secret_sharing, "share, reconstruct, mpc_add, mpc_mul (Beaver)"},
      {"bfv-sk", SchemeFamily::homomorphic, "keygen, encrypt, decrypt, add, mul_plain"},
  };
  return schemes;
}

}  // namespace ppim::protocols
