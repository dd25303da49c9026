#pragma once

#include <stdexcept>
#include <string>

namespace sectorflow {

enum class ErrorCode {
  kInputNotFound,
  kMalformedInput,
  kInvalidArgument,
  kDegenerateSeries,
  kEmptyResult,
  kMisaligned,
  kNoSpanningArborescence,
  kInsufficientCoverage,
  kConfig,
};

/// Single exception type thrown by the library; `code()` lets callers map
/// failures to exit statuses without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace sectorflow
