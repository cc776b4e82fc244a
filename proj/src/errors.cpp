#include "hypcurv/errors.hpp"

namespace hypcurv {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::unsupported_dimension: return "unsupported-dimension";
    case ErrorKind::invalid_argument: return "invalid-argument";
    case ErrorKind::domain_error: return "domain-error";
    case ErrorKind::integration_failure: return "integration-failure";
    case ErrorKind::origin_not_interior: return "origin-not-interior";
    case ErrorKind::degenerate_hull: return "degenerate-hull";
    case ErrorKind::non_extreme_vertex: return "non-extreme-vertex";
    case ErrorKind::degenerate_vertex: return "degenerate-vertex";
    case ErrorKind::uncovered_direction: return "uncovered-direction";
    case ErrorKind::precondition_failed: return "precondition-failed";
    case ErrorKind::io_error: return "io-error";
  }
  return "unknown";
}

void fail(ErrorKind kind, const std::string& message, long index) {
  throw Error(kind, std::string(to_string(kind)) + ": " + message, index);
}

}  // namespace hypcurv
