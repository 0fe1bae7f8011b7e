#include "ahc/error.hpp"

namespace ahc {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid-argument";
    case ErrorCode::degenerate_parameters: return "degenerate-parameters";
    case ErrorCode::singular_basis: return "singular-basis";
    case ErrorCode::truncated: return "truncated";
    case ErrorCode::bad_magic: return "bad-magic";
    case ErrorCode::unsupported_version: return "unsupported-version";
    case ErrorCode::invalid_basis_id: return "invalid-basis-id";
    case ErrorCode::invalid_code_lengths: return "invalid-code-lengths";
    case ErrorCode::corrupt_stream: return "corrupt-stream";
    case ErrorCode::image_format: return "image-format";
    case ErrorCode::dimension_mismatch: return "dimension-mismatch";
    case ErrorCode::io_error: return "io-error";
  }
  return "unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(what), code_(code) {}

}  // namespace ahc
