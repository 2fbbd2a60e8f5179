#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rfdg {

enum class ErrorCode {
  MalformedJson,
  SchemaViolation,
  DuplicateId,
  DanglingEndpoint,
  EmptyGraph,
  UnknownId,
  InvalidPath,
  EntryPresent,
  CyclePresent,
  InfinitePathCount,
  CountOverflow,
  TrivialDecomposition,
  InconsistentDecomposition,
  NotUnitModulus,
  EmptyFamily,
  GraphMismatch,
  LayoutMismatch,
  TooFewPoints,
  NoEntries,
  InvalidArgument,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedJson: return "MalformedJson";
    case ErrorCode::SchemaViolation: return "SchemaViolation";
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::DanglingEndpoint: return "DanglingEndpoint";
    case ErrorCode::EmptyGraph: return "EmptyGraph";
    case ErrorCode::UnknownId: return "UnknownId";
    case ErrorCode::InvalidPath: return "InvalidPath";
    case ErrorCode::EntryPresent: return "EntryPresent";
    case ErrorCode::CyclePresent: return "CyclePresent";
    case ErrorCode::InfinitePathCount: return "InfinitePathCount";
    case ErrorCode::CountOverflow: return "CountOverflow";
    case ErrorCode::TrivialDecomposition: return "TrivialDecomposition";
    case ErrorCode::InconsistentDecomposition: return "InconsistentDecomposition";
    case ErrorCode::NotUnitModulus: return "NotUnitModulus";
    case ErrorCode::EmptyFamily: return "EmptyFamily";
    case ErrorCode::GraphMismatch: return "GraphMismatch";
    case ErrorCode::LayoutMismatch: return "LayoutMismatch";
    case ErrorCode::TooFewPoints: return "TooFewPoints";
    case ErrorCode::NoEntries: return "NoEntries";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace rfdg
