#pragma once

#include <stdexcept>
#include <string>

namespace dpc {

enum class Errc {
  invalid_argument,
  pole,
  precision_unreachable,
  realness_violation,
  not_certified,
  io,
  checksum,
  version,
  invariant,
  branch_mismatch,
  overwrite_refused,
};

const char* to_string(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), detail_(what) {}

  Errc code() const noexcept { return code_; }
  /// Message without the error-kind prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  Errc code_;
  std::string detail_;
};

inline void require(bool cond, const std::string& what, Errc code = Errc::invalid_argument) {
  if (!cond) throw Error(code, what);
}

}  // namespace dpc
