#pragma once

#include <stdexcept>
#include <string>

namespace gat {

// Failure categories shared across the library. Every throw site uses
// gat::Error so callers can switch on code() instead of parsing messages.
enum class Errc {
  // probability vectors and information measures
  ZeroMass,
  NonFinite,
  TooShort,
  DimensionMismatch,
  InfiniteResult,
  BadWeights,
  // acquisition
  BadPoolSize,
  MissingSurrogate,
  BudgetExceedsPool,
  BadProbability,
  BadConfig,
  // clustering
  EmptyInput,
  BadK,
  Exhausted,
  // risk estimation
  EmptyPool,
  EmptySubset,
  // metrics
  GridMismatch,
  TooFewPoints,
  DegenerateSubset,
  NonPositive,
  // statement adaptation
  TooFewOptions,
  ReformatterFailure,
  // data, cache, remote scoring
  ParseError,
  ValidationError,
  DuplicateId,
  BadScenario,
  CacheMiss,
  RemoteFailure,
};

inline const char* to_string(Errc c) {
  switch (c) {
    case Errc::ZeroMass: return "ZeroMass";
    case Errc::NonFinite: return "NonFinite";
    case Errc::TooShort: return "TooShort";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::InfiniteResult: return "InfiniteResult";
    case Errc::BadWeights: return "BadWeights";
    case Errc::BadPoolSize: return "BadPoolSize";
    case Errc::MissingSurrogate: return "MissingSurrogate";
    case Errc::BudgetExceedsPool: return "BudgetExceedsPool";
    case Errc::BadProbability: return "BadProbability";
    case Errc::BadConfig: return "BadConfig";
    case Errc::EmptyInput: return "EmptyInput";
    case Errc::BadK: return "BadK";
    case Errc::Exhausted: return "Exhausted";
    case Errc::EmptyPool: return "EmptyPool";
    case Errc::EmptySubset: return "EmptySubset";
    case Errc::GridMismatch: return "GridMismatch";
    case Errc::TooFewPoints: return "TooFewPoints";
    case Errc::DegenerateSubset: return "DegenerateSubset";
    case Errc::NonPositive: return "NonPositive";
    case Errc::TooFewOptions: return "TooFewOptions";
    case Errc::ReformatterFailure: return "ReformatterFailure";
    case Errc::ParseError: return "ParseError";
    case Errc::ValidationError: return "ValidationError";
    case Errc::DuplicateId: return "DuplicateId";
    case Errc::BadScenario: return "BadScenario";
    case Errc::CacheMiss: return "CacheMiss";
    case Errc::RemoteFailure: return "RemoteFailure";
  }
  return "UnknownError";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace gat
