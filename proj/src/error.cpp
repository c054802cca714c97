#include "octopus/error.hpp"

namespace octopus {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::IndivisibleParams: return "IndivisibleParams";
    case ErrorCode::FisherViolation: return "FisherViolation";
    case ErrorCode::SearchExhausted: return "SearchExhausted";
    case ErrorCode::NoDesignExists: return "NoDesignExists";
    case ErrorCode::UnknownHost: return "UnknownHost";
    case ErrorCode::ZeroGoodDies: return "ZeroGoodDies";
    case ErrorCode::InsufficientCapacity: return "InsufficientCapacity";
    case ErrorCode::UnknownAllocation: return "UnknownAllocation";
    case ErrorCode::MalformedTrace: return "MalformedTrace";
    case ErrorCode::EmptyPlan: return "EmptyPlan";
    case ErrorCode::NoCommonMhd: return "NoCommonMhd";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace octopus
