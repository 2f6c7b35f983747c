#include "dpc/error.hpp"

namespace dpc {

const char* to_string(Errc code) noexcept {
  switch (code) {
    case Errc::invalid_argument: return "invalid argument";
    case Errc::pole: return "pole";
    case Errc::precision_unreachable: return "precision unreachable";
    case Errc::realness_violation: return "realness violation";
    case Errc::not_certified: return "not certified";
    case Errc::io: return "io error";
    case Errc::checksum: return "checksum mismatch";
    case Errc::version: return "unsupported version";
    case Errc::invariant: return "invariant violated";
    case Errc::branch_mismatch: return "rotation branch mismatch";
    case Errc::overwrite_refused: return "overwrite refused";
  }
  return "unknown";
}

}  // namespace dpc
