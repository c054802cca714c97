#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace octopus {

enum class ErrorCode {
  InvalidArgument,
  IndivisibleParams,
  FisherViolation,
  SearchExhausted,
  NoDesignExists,
  UnknownHost,
  ZeroGoodDies,
  InsufficientCapacity,
  UnknownAllocation,
  MalformedTrace,
  EmptyPlan,
  NoCommonMhd,
  ParseError,
};

std::string_view to_string(ErrorCode code);

// Single exception type for the library; callers switch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class SearchExhausted : public Error {
 public:
  SearchExhausted(std::uint64_t nodes, const std::string& what)
      : Error(ErrorCode::SearchExhausted, what), nodes_(nodes) {}

  std::uint64_t nodes_expanded() const noexcept { return nodes_; }

 private:
  std::uint64_t nodes_;
};

}  // namespace octopus
