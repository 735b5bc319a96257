#include "gramprof/error.hpp"

namespace gramprof {
namespace {

std::string describe(ErrorCode code, const std::string& message, const SourceLocation& where) {
  std::string out{to_string(code)};
  if (!where.file.empty() || where.line != 0 || where.offset != std::string::npos) {
    out += " at ";
    if (!where.file.empty()) out += where.file;
    if (where.line != 0) {
      if (!where.file.empty()) out += ':';
      out += "line " + std::to_string(where.line);
    }
    if (where.offset != std::string::npos) {
      if (!where.file.empty() || where.line != 0) out += ", ";
      out += "offset " + std::to_string(where.offset);
    }
  }
  out += ": ";
  out += message;
  return out;
}

}  // namespace

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kUnbalancedParens: return "UnbalancedParens";
    case ErrorCode::kMalformedNode: return "MalformedNode";
    case ErrorCode::kIo: return "IoError";
    case ErrorCode::kFormat: return "FormatError";
    case ErrorCode::kDuplicateItemId: return "DuplicateItemId";
    case ErrorCode::kCycleDetected: return "CycleDetected";
    case ErrorCode::kUnterminatedDefinition: return "UnterminatedDefinition";
    case ErrorCode::kUnknownIdentifier: return "UnknownIdentifier";
    case ErrorCode::kEmptyCorpus: return "EmptyCorpus";
    case ErrorCode::kSampleTooLarge: return "SampleTooLarge";
    case ErrorCode::kInvalidSamplePlan: return "InvalidSamplePlan";
    case ErrorCode::kNoAuthorsFound: return "NoAuthorsFound";
    case ErrorCode::kCategoryMismatch: return "CategoryMismatch";
    case ErrorCode::kZeroVector: return "ZeroVector";
    case ErrorCode::kTooFewProfiles: return "TooFewProfiles";
    case ErrorCode::kEmptyProfile: return "EmptyProfile";
    case ErrorCode::kEmptySample: return "EmptySample";
    case ErrorCode::kExactTooLarge: return "ExactTooLarge";
    case ErrorCode::kInvalidP: return "InvalidP";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kUnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::kMissingCache: return "MissingCache";
    case ErrorCode::kStaleCache: return "StaleCache";
  }
  return "UnknownError";
}

Error::Error(ErrorCode code, const std::string& message)
    : Error(code, message, SourceLocation{}) {}

Error::Error(ErrorCode code, const std::string& message, SourceLocation where)
    : std::runtime_error(describe(code, message, where)),
      code_(code),
      message_(message),
      where_(std::move(where)) {}

}  // namespace gramprof
