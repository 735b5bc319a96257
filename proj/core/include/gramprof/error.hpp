#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace gramprof {

enum class ErrorCode {
  // derivation
  kEmptyInput,
  kUnbalancedParens,
  kMalformedNode,
  kIo,
  kFormat,
  kDuplicateItemId,
  // hierarchy
  kCycleDetected,
  kUnterminatedDefinition,
  kUnknownIdentifier,
  // profile
  kEmptyCorpus,
  kSampleTooLarge,
  kInvalidSamplePlan,
  kNoAuthorsFound,
  kCategoryMismatch,
  // stats
  kZeroVector,
  kTooFewProfiles,
  kEmptyProfile,
  kEmptySample,
  kExactTooLarge,
  kInvalidP,
  kInvalidArgument,
  // report / cli
  kUnsupportedFormat,
  kMissingCache,
  kStaleCache,
};

std::string_view to_string(ErrorCode code) noexcept;

// Where in the input an error was detected. Fields that do not apply stay
// at their defaults.
struct SourceLocation {
  std::string file;
  std::size_t line = 0;                        // 1-based, 0 = unknown
  std::size_t offset = std::string::npos;      // byte offset within the line/text
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);
  Error(ErrorCode code, const std::string& message, SourceLocation where);

  ErrorCode code() const noexcept { return code_; }
  const std::string& message() const noexcept { return message_; }
  const SourceLocation& where() const noexcept { return where_; }

 private:
  ErrorCode code_;
  std::string message_;
  SourceLocation where_;
};

}  // namespace gramprof
