#pragma once

#include <stdexcept>
#include <string>

namespace qclab {

enum class ErrorKind {
  invalid_input,
  overflow,
  capacity,
  divergence,
  convergence,
  no_zeros,
  boundary,
  contour_too_close,
  domain,
  empty_set,
  insufficient_data,
  parse,
  io,
};

const char* to_string(ErrorKind kind) noexcept;

// Every library failure is reported through this type; `kind` lets callers
// (the CLI in particular) map failures to stages and exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace qclab
