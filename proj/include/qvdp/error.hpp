#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qvdp {

enum class ErrorCode {
  InvalidParams,
  Domain,
  StepUnderflow,
  NonFinite,
  NoConvergence,
  NoCycle,
  ManifoldEscape,
};

[[nodiscard]] std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace qvdp
