#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mobbo {

enum class ErrorCode {
  // input
  kMalformedLine,
  kEmptyNetwork,
  kSelfLoop,
  kUnknownNodeInAttributes,
  kMissingAttributeRow,
  kIsolatedNode,
  kPartitionNodeMismatch,
  kEmptyAfterSingletonDrop,
  kIo,
  // contract
  kOutOfRangeNode,
  kOverlappingSets,
  kEmptyPartition,
  kOverlapPresent,
  kNoAttributes,
  kUnevaluatedHabitat,
  kInsufficientPopulation,
  kPopulationTooSmall,
  kConfigInvalid,
  kEmptyFront,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMalformedLine: return "MalformedLine";
    case ErrorCode::kEmptyNetwork: return "EmptyNetwork";
    case ErrorCode::kSelfLoop: return "SelfLoop";
    case ErrorCode::kUnknownNodeInAttributes: return "UnknownNodeInAttributes";
    case ErrorCode::kMissingAttributeRow: return "MissingAttributeRow";
    case ErrorCode::kIsolatedNode: return "IsolatedNode";
    case ErrorCode::kPartitionNodeMismatch: return "PartitionNodeMismatch";
    case ErrorCode::kEmptyAfterSingletonDrop: return "EmptyAfterSingletonDrop";
    case ErrorCode::kIo: return "Io";
    case ErrorCode::kOutOfRangeNode: return "OutOfRangeNode";
    case ErrorCode::kOverlappingSets: return "OverlappingSets";
    case ErrorCode::kEmptyPartition: return "EmptyPartition";
    case ErrorCode::kOverlapPresent: return "OverlapPresent";
    case ErrorCode::kNoAttributes: return "NoAttributes";
    case ErrorCode::kUnevaluatedHabitat: return "UnevaluatedHabitat";
    case ErrorCode::kInsufficientPopulation: return "InsufficientPopulation";
    case ErrorCode::kPopulationTooSmall: return "PopulationTooSmall";
    case ErrorCode::kConfigInvalid: return "ConfigInvalid";
    case ErrorCode::kEmptyFront: return "EmptyFront";
  }
  return "Unknown";
}

// Input errors are the caller's data being wrong; everything else is a
// violated precondition or an engine failure.
constexpr bool is_input_error(ErrorCode code) {
  return code <= ErrorCode::kIo;
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace mobbo
