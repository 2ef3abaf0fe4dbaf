#include "acceptance/errors.hpp"

namespace acceptance {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::shape: return "shape";
    case ErrorKind::invalid_value: return "invalid_value";
    case ErrorKind::out_of_domain: return "out_of_domain";
    case ErrorKind::unknown_variable: return "unknown_variable";
    case ErrorKind::invalid_request: return "invalid_request";
    case ErrorKind::parse: return "parse";
    case ErrorKind::empty_input: return "empty_input";
    case ErrorKind::degenerate_feature: return "degenerate_feature";
    case ErrorKind::divergence: return "divergence";
  }
  return "unknown";
}

}  // namespace acceptance
