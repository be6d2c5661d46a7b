#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace primmdebug {

enum class ErrorCode {
  kParse,
  kSchema,
  kInvariant,
  kIo,
  kPrecondition,
  // stage machine
  kIllegalEvent,
  kArticulationRejected,
  kEditRejected,
  kRunRejected,
  kOutOfRange,
  // runner
  kSpawnFailure,
  // session log
  kOrdering,
  kUnknownSession,
  kMalformedSession,
  // service / analytics
  kUnknownChallenge,
  kMissingChallenge,
  kNoData,
  kUndefined,
  kDegenerate,
  kJoin,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries a machine-readable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace primmdebug
