#pragma once

#include <stdexcept>
#include <string>

namespace hypcurv {

enum class ErrorKind {
  unsupported_dimension,
  invalid_argument,
  domain_error,
  integration_failure,
  origin_not_interior,
  degenerate_hull,
  non_extreme_vertex,
  degenerate_vertex,
  uncovered_direction,
  precondition_failed,
  io_error,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message, long index = -1)
      : std::runtime_error(message), kind_(kind), index_(index) {}

  ErrorKind kind() const noexcept { return kind_; }
  // Offending element (vertex, node, point) when one exists, else -1.
  long index() const noexcept { return index_; }

 private:
  ErrorKind kind_;
  long index_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message, long index = -1);

}  // namespace hypcurv
