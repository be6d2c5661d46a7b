#include "primmdebug/error.hpp"

namespace primmdebug {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParse: return "parse_error";
    case ErrorCode::kSchema: return "schema_error";
    case ErrorCode::kInvariant: return "invariant_error";
    case ErrorCode::kIo: return "io_error";
    case ErrorCode::kPrecondition: return "precondition_violation";
    case ErrorCode::kIllegalEvent: return "illegal_event";
    case ErrorCode::kArticulationRejected: return "articulation_rejected";
    case ErrorCode::kEditRejected: return "edit_rejected";
    case ErrorCode::kRunRejected: return "run_rejected";
    case ErrorCode::kOutOfRange: return "out_of_range";
    case ErrorCode::kSpawnFailure: return "spawn_failure";
    case ErrorCode::kOrdering: return "ordering_error";
    case ErrorCode::kUnknownSession: return "unknown_session";
    case ErrorCode::kMalformedSession: return "malformed_session";
    case ErrorCode::kUnknownChallenge: return "unknown_challenge";
    case ErrorCode::kMissingChallenge: return "missing_challenge";
    case ErrorCode::kNoData: return "no_data";
    case ErrorCode::kUndefined: return "undefined";
    case ErrorCode::kDegenerate: return "degenerate";
    case ErrorCode::kJoin: return "join_error";
  }
  return "unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(message), code_(code) {}

}  // namespace primmdebug
