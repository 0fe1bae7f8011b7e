#pragma once

#include <stdexcept>
#include <string>

namespace ahc {

// Every failure raised by the library carries one of these codes so callers
// (the CLI in particular) can map them to distinct diagnostics.
enum class ErrorCode {
  invalid_argument,
  degenerate_parameters,
  singular_basis,
  truncated,
  bad_magic,
  unsupported_version,
  invalid_basis_id,
  invalid_code_lengths,
  corrupt_stream,
  image_format,
  dimension_mismatch,
  io_error,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ahc
