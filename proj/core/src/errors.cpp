#include "kwidth/errors.hpp"

namespace kwidth {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Validation: return "validation";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::TolUnreachable: return "tol_unreachable";
    case ErrorKind::BracketFailure: return "bracket_failure";
    case ErrorKind::SignDegenerate: return "sign_degenerate";
    case ErrorKind::SingularSystem: return "singular_system";
    case ErrorKind::NotFound: return "not_found";
  }
  return "unknown";
}

}  // namespace kwidth
